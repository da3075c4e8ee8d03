"""Command-line entry point: one subcommand per run mode.

Exit codes: 0 success, 1 validation error, 2 numerical-invariant violation,
3 truncation-unsafe exact run.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import MODES, parse_config
from .errors import ConfigError, InvariantViolation, PoldynError
from .runner import run


def build_parser():
    parser = argparse.ArgumentParser(
        prog="poldyn",
        description="Collective cavity-polariton dynamics and spectra",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode, help=f"run a {mode} computation")
        p.add_argument("--config", required=True, help="YAML config file")
        p.add_argument(
            "--out", default=None,
            help="output directory (default: run.out from the config, else '.')",
        )
        p.add_argument("--threads", type=int, default=1, help="sweep parallelism")
        p.add_argument(
            "--seed", type=int, default=None,
            help="RNG seed (used only by sample-based disorder)",
        )
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = parse_config(text, mode=args.mode)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        out_dir = args.out or cfg.out_dir or "."
        outcome = run(cfg, out_dir, threads=args.threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PoldynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(outcome.summary)
    for path in outcome.files:
        print(f"wrote {path}")
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
