"""Hill-climb for maximal starred-inequality violations over many seeds.

    python scripts/search_violations.py --objective chsh_star --budget 100000 --seeds 10
"""

import argparse
import time

from obsfreq.search import violation_search

ARITY = {"wd_star": 3, "chsh_star": 4}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--objective", choices=sorted(ARITY), default="wd_star")
    ap.add_argument("--budget", type=int, default=10_000)
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()

    n = ARITY[args.objective]
    print(f"{'seed':>4}  {'score':>10}  {'secs':>6}  support")
    for seed in range(args.seeds):
        t0 = time.perf_counter()
        dist, score = violation_search(args.objective, n, args.budget, seed)
        support = ", ".join(f"{k}:{v:.3f}" for k, v in sorted(dist.support().items(), key=lambda kv: -kv[1]) if v > 1e-3)
        print(f"{seed:>4}  {score:>10.6f}  {time.perf_counter() - t0:>6.2f}  {support}")


if __name__ == "__main__":
    main()
