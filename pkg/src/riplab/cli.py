"""Command line front end: ``riplab run`` and ``riplab calc``."""
from __future__ import annotations

import argparse
import json
import sys

from . import bounds, experiments
from .experiments import ConfigError, ExperimentConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILURE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(_fail(f"{self.prog}: error: {message}", EXIT_USAGE))


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riplab", description="Sampling, RIP checks and bound calculators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run an experiment and write CSV, SVG and JSON artifacts")
    run.add_argument("experiment", choices=experiments.EXPERIMENTS)
    run.add_argument("--config", help="JSON file with ExperimentConfig fields")
    run.add_argument("--seed", type=int)
    run.add_argument("--reps", type=int, help="number of repetitions")
    run.add_argument("--out", help="output directory")

    calc = sub.add_parser("calc", help="evaluate a closed-form bound")
    calc.add_argument("bound", choices=sorted(bounds.BOUNDS))
    calc.add_argument("params", nargs="*", metavar="key=value")
    return parser


def _parse_params(items):
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ValueError(f"expected key=value, got {item!r}")
        if key in params:
            raise ValueError(f"parameter {key!r} given twice")
        params[key] = value
    return params


def cmd_run(args) -> int:
    overrides = {"seed": args.seed, "repetitions": args.reps, "out": args.out}
    try:
        if args.config:
            cfg = ExperimentConfig.from_json(args.config, experiment=args.experiment, **overrides)
        else:
            cfg = ExperimentConfig.from_dict({"experiment": args.experiment}, **overrides)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        return _fail(f"riplab run: bad configuration: {exc}", EXIT_USAGE)
    try:
        summary = experiments.run(cfg)
    except OSError as exc:
        return _fail(f"riplab run: cannot write output: {exc}", EXIT_FAILURE)
    except (ArithmeticError, ValueError, RuntimeError, NotImplementedError) as exc:
        return _fail(f"riplab run: {cfg.experiment} failed: {exc}", EXIT_FAILURE)
    print(json.dumps(summary["result"], sort_keys=True, default=experiments._json_default))
    return EXIT_OK


def cmd_calc(args) -> int:
    try:
        params = _parse_params(args.params)
        result = bounds.evaluate(args.bound, **params)
    except (KeyError, ValueError, TypeError) as exc:
        return _fail(f"riplab calc: {exc}", EXIT_USAGE)
    except (ArithmeticError, OverflowError) as exc:
        return _fail(f"riplab calc: numerical failure: {exc}", EXIT_FAILURE)
    print(json.dumps(result.to_dict(), sort_keys=True))
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "run":
        return cmd_run(args)
    return cmd_calc(args)


if __name__ == "__main__":
    sys.exit(main())
