"""Run all six experiments at their default sizes and print each summary.

Usage: python3 scripts/reproduce_figures.py [--out results] [--seed 0] [--only rip-dist ...]
"""
import argparse
import json
import os
import time

from riplab import experiments
from riplab.experiments import ExperimentConfig


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--only", nargs="*", choices=experiments.EXPERIMENTS)
    args = parser.parse_args()
    for name in args.only or experiments.EXPERIMENTS:
        cfg = ExperimentConfig.from_dict({"experiment": name, "seed": args.seed, "out": os.path.join(args.out, name)})
        t0 = time.perf_counter()
        summary = experiments.run(cfg)
        print(f"{name} ({time.perf_counter() - t0:.1f} s) -> {cfg.out}")
        print(json.dumps(summary["result"], indent=2, sort_keys=True, default=experiments._json_default))


if __name__ == "__main__":
    main()
