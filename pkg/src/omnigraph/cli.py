"""Command-line entry point.

Every subcommand reads a JSON config file and accepts overrides for the
seed, output directory, and worker count:

    omnigraph <kind> --config cfg.json [--seed N] [--out DIR] [--threads K]

Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, DataError, NumericalError
from .runner import KINDS, ExperimentConfig, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omnigraph",
        description="Joint spectral inference on vertex-matched graph collections.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a '{kind}' experiment")
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--out", default=None, help="override output directory")
        p.add_argument("--threads", type=int, default=None, help="worker processes")
    return parser


def _load_config(args) -> ExperimentConfig:
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    raw.setdefault("kind", args.kind)
    if raw["kind"] != args.kind:
        raise ConfigError(
            f"config kind {raw['kind']!r} does not match subcommand {args.kind!r}"
        )
    return ExperimentConfig.from_dict(
        raw, seed=args.seed, out=args.out, threads=args.threads
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        bundle = run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for name, path in sorted(bundle.tables.items()):
        print(f"{name}: {path}")
    print(f"manifest: {bundle.manifest}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
