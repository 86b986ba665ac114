"""Tabulate the closed-form sample-complexity bounds for a range of dimensions."""
import argparse
import math

from riplab import bounds


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--delta", type=float, default=0.5)
    parser.add_argument("--p", type=float, default=0.01)
    args = parser.parse_args()
    print(f"{'m':>5} {'linear':>14} {'sparse s=2':>14} {'linear/(m^3 ln m)':>18}")
    for m in (5, 10, 20, 50, 100, 200):
        lin = bounds.sample_complexity_linear(m, args.delta, args.p)
        sp = bounds.sample_complexity_sparse(m, 2, args.delta, args.p)
        print(f"{m:5d} {lin:14.4g} {sp:14.4g} {lin / (m**3 * math.log(m)):18.3f}")


if __name__ == "__main__":
    main()
