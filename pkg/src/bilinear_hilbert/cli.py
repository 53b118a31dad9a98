"""Command-line front end for the batch harness."""

from __future__ import annotations

import argparse
import logging
import sys

from . import harness
from .errors import BhtError, ConfigurationError

# experiments each subcommand may run; `eval` takes any of them
SUBCOMMANDS = {
    "eval": harness.EXPERIMENTS,
    "invert": ("invert",),
    "sweep": ("sweep_gap", "sweep_poisson", "mollifier"),
    "lebesgue": ("lebesgue",),
    "lemmas": ("product_lemmas",),
    "dual": ("dual",),
    "probe": ("norm_probe",),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bilinear-hilbert",
                                     description="Numerical checks for the bilinear Hilbert transform.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, allowed in SUBCOMMANDS.items():
        p = sub.add_parser(name, help=f"run a config with experiment in {{{', '.join(allowed)}}}")
        p.add_argument("--config", required=True, help="INI run config")
        p.add_argument("--out", default=None, help="report directory (default: output_path from the config)")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        p.add_argument("--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.jobs < 1:
            raise ConfigurationError("--jobs must be >= 1")
        cfg = harness.load_config(args.config)
        if cfg.experiment not in SUBCOMMANDS[args.command]:
            raise ConfigurationError(f"'{args.command}' cannot run experiment {cfg.experiment!r}")
        return harness.run(cfg, args.out, args.jobs)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return harness.EXIT_CONFIG
    except BhtError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return harness.EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
