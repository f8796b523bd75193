"""Tabulate Hecke_2 verdicts for triangular systems across degrees.

For each (p, alpha) the table shows the engine verdict, the oracle verdict,
the obstruction on the curve generators, the semisimplified comparison and
the F-step outcome under both readings of F on H1.

    python3 scripts/gagm_obstruction_survey.py --genus 2 --samples 6 --seed 3
"""

import argparse
import random

from hecke_eigen.gagm import TriangularSystem, run_gagm
from hecke_eigen.local_systems import AddChar
from hecke_eigen.moduli import curve
from hecke_eigen.sampling import random_add_char, random_curve_char


def fmt(values):
    return "(" + ", ".join(str(v) for v in values) + ")"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--genus", type=int, default=1)
    ap.add_argument("--samples", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--lo", type=int, default=-1)
    ap.add_argument("--hi", type=int, default=2)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    g = args.genus
    print("p | alpha | d | engine | oracle | obstruction | semisimple | F divisor | F homotopy")
    for k in range(args.samples):
        p = random_curve_char(rng, g)
        # the first row is the pure twist alpha = 0
        alpha = random_add_char(rng, curve(g), nonzero=True) if k else AddChar.zero(curve(g))
        sys = TriangularSystem(p, alpha)
        _, verdicts = run_gagm(sys, (args.lo, args.hi))
        for v in verdicts:
            f = v.audit.F_step
            print(
                " | ".join(
                    [
                        fmt(p.values),
                        fmt(alpha.values),
                        str(v.degree),
                        "iso" if v.isomorphic else "not iso",
                        "iso" if v.oracle_isomorphic else "not iso",
                        fmt(v.obstruction.values) if v.obstruction is not None else "-",
                        str(v.semisimplified),
                        "iso" if f.passed else "not iso",
                        "iso" if f.detail["homotopy_reading_isomorphic"] else "not iso",
                    ]
                )
            )


if __name__ == "__main__":
    main()
