"""Sweep observability channels on the peg board and print |p|, [p] and the
measured frequency as CSV.

    python scripts/deviation_scan.py --depth 4 --trials 500000 > scan.csv
"""

import argparse
import math
import sys

from obsfreq.boxsim import CSV_COLUMNS, BoxExperimentConfig, Coupled, Granular, Independent, deviation_scan, sweep
from obsfreq.cli import to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--bias", type=float, default=0.5)
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    models = [Independent(p) for p in (1.0, 0.5, 0.1, 0.01)]
    models += [Granular(r) for r in (0.01, 0.1, 1.0, 10.0, math.inf)]
    # outcome-coupled channels: the only ones where [p] departs from |p|
    models += [Coupled(a, 0.1) for a in (0.1, 0.3, 0.6, 0.9)]

    base = BoxExperimentConfig(args.depth, args.bias, trials=args.trials, seed=args.seed)
    rows = deviation_scan(sweep(base, models))
    labels = {row.config_id: repr(m) for row, m in zip(rows, models)}
    out = [dict({c: getattr(r, c) for c in CSV_COLUMNS}, model=labels[r.config_id]) for r in rows]
    sys.stdout.write(to_csv(CSV_COLUMNS + ("model",), out))


if __name__ == "__main__":
    main()
