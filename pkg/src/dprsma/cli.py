"""Command-line interface: run experiments, validate configs, list presets.

Exit codes: 0 success, 2 configuration error, 3 numerical-consistency error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .analytic import NumericalConsistencyError
from .config import ConfigError, load_config
from .presets import PresetCase, list_presets
from .results import emit_csv, emit_json
from .runner import run_case, run_preset

WORKERS_ENV = "RSMA_SIM_WORKERS"


def _parse_override(text: str):
    key, sep, raw = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"override must look like key=value, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dprsma",
        description="Dual-polarized massive MIMO RSMA link simulator and analytics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a preset or an explicit config")
    run.add_argument("--config", help="JSON config file or inline JSON object")
    run.add_argument("--preset", help="preset name (see list-presets)")
    run.add_argument(
        "--override", action="append", default=[], type=_parse_override,
        metavar="KEY=VALUE", help="config field override (JSON-typed value)",
    )
    run.add_argument("--trials", type=int, help="override both trial counts")
    run.add_argument("--seed", type=int, help="override the root seed")
    run.add_argument(
        "--workers", type=int,
        default=int(os.environ.get(WORKERS_ENV, "1")),
        help=f"parallel workers (default from ${WORKERS_ENV} or 1)",
    )
    run.add_argument("--out", required=True, help="output file path")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument(
        "--kind", choices=("outage", "ergodic", "outage_sum_rate"), default="outage",
        help="metric kind when running from --config (presets carry their own)",
    )

    val = sub.add_parser("validate", help="validate a config and exit")
    val.add_argument("--config", help="JSON config file or inline JSON object")

    sub.add_parser("list-presets", help="list available presets")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-presets":
            for name in list_presets():
                print(name)
            return 0
        if args.command == "validate":
            config = load_config(args.config)
            print(json.dumps(config.to_dict(), indent=1, sort_keys=True))
            return 0
        return _run(args)
    except (ConfigError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalConsistencyError as exc:
        print(f"numerical consistency error: {exc}", file=sys.stderr)
        return 3


def _run(args) -> int:
    overrides = dict(args.override)
    if args.preset:
        rows, echo = run_preset(
            args.preset, overrides=overrides or None, trials=args.trials,
            seed=args.seed, workers=args.workers,
        )
    else:
        config = load_config(args.config)
        patch = dict(config.to_dict())
        patch.update(overrides)
        if args.trials is not None:
            patch["trials_outage"] = args.trials
            patch["trials_ergodic"] = args.trials
        if args.seed is not None:
            patch["seed"] = args.seed
        config = load_config(patch)
        rows = run_case(PresetCase(config=config, kind=args.kind), workers=args.workers)
        echo = config.to_dict()
        echo["kind"] = args.kind
    if args.format == "csv":
        emit_csv(rows, args.out, config_echo=echo)
    else:
        emit_json(rows, args.out, config_echo=echo)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
