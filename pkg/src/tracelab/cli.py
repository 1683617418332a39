"""Command-line front end: ``tracelab <experiment> --config <path>``.

Experiments run the named module's checks and emit CSV artifacts plus a
``summary.csv``; exit status is nonzero iff a hard invariant failed.
``TRACELAB_THREADS`` caps the compiled kernels' worker count (results are
thread-count independent by the deterministic reduction contract).
"""

from __future__ import annotations

import argparse
import sys

from tracelab.config import EXPERIMENTS, ConfigError, load_config
from tracelab.experiments import run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracelab",
        description="Numerical experiments for half-space trace and extension operators.",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", required=True, help="flat key=value config file")
    parser.add_argument("--out", default=None, help="output directory (default: config `out` or cwd)")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.experiment)
    except (OSError, ConfigError) as e:
        print(f"tracelab: {e}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg.values["seed"] = str(args.seed)
    out_dir = args.out or cfg.get("out") or "."
    try:
        return run_experiment(cfg, out_dir)
    except ConfigError as e:
        print(f"tracelab: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
