"""Build GL1 eigensheaf families over growing windows and time each stage.

    python3 scripts/gl1_window_sweep.py --max-genus 4 --count 20
"""

import argparse
import random
import time

from hecke_eigen.gl1 import build_eigensheaf, check_eigen_gl1, default_window, uniqueness_check
from hecke_eigen.sampling import random_curve_char


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-genus", type=int, default=3)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--extra", type=int, default=2, help="widen the default window by this much on each side")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    print("genus | window | families | eigen pairs ok | unique | seconds")
    for g in range(1, args.max_genus + 1):
        lo, hi = default_window(g)
        window = (lo - args.extra, hi + args.extra)
        t0 = time.perf_counter()
        pairs = unique = 0
        for _ in range(args.count):
            e = random_curve_char(rng, g)
            fam = build_eigensheaf(e, window)
            pairs += sum(check_eigen_gl1(e, fam, d) for d in range(window[0], window[1]))
            unique += uniqueness_check(e, window)
        dt = time.perf_counter() - t0
        print(f"{g} | [{window[0]}, {window[1]}] | {args.count} | {pairs} | {unique}/{args.count} | {dt:.2f}")


if __name__ == "__main__":
    main()
