"""Command-line entry point.

    hecke-eigen gl1-check --config cfg.json [--seed N] [--out report.json] [--pretty]

The JSON report goes to --out (or stdout); a one-line-per-check summary
goes to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, config_from_dict, parse_config
from .runner import RunReport, config_error_report, exit_code, run

COMMANDS = {"gl1-check": "gl1", "gagm-check": "gagm", "classify": "classify", "selftest": "selftest"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hecke-eigen", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, scenario in COMMANDS.items():
        p = sub.add_parser(name, help=f"run the {scenario} suite")
        p.add_argument("--config", type=Path, required=scenario != "selftest", help="JSON run configuration")
        p.add_argument("--seed", type=int, default=None, help="seed for randomized suites (overrides config)")
        p.add_argument("--out", type=Path, default=None, help="write the JSON report here")
        p.add_argument("--pretty", action="store_true", help="indent the JSON report")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    scenario = COMMANDS[args.command]
    if args.config is None:
        cfg = config_from_dict({}, scenario)
    else:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError("/", f"cannot read {args.config}: {exc.strerror}") from None
        cfg = parse_config(text, scenario)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("/seed", "must be an unsigned 64-bit integer")
        cfg = RunConfig(**{**cfg.__dict__, "seed": args.seed})
    if args.out is not None:
        cfg = RunConfig(**{**cfg.__dict__, "out": str(args.out)})
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        report: RunReport = config_error_report(exc.path, exc.message)
    else:
        report = run(cfg)

    text = report.dumps(pretty=args.pretty)
    out = args.out
    if out is None and report.error is None and cfg.out is not None:
        out = Path(cfg.out)
    if out is not None:
        out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(report.summary(), file=sys.stderr)
    return exit_code(report)


if __name__ == "__main__":
    raise SystemExit(main())
