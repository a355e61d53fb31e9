"""Depth vs. best displacement for d * m with m in the normal closure of <Q1, Q2>.

    python scripts/lemma1_curve.py --d "D1" --max-depth 3
"""
import argparse
import time

from csplab import so3
from csplab.dsl import format_word, parse_word


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--d", default="D1")
    p.add_argument("--max-depth", type=int, default=3)
    args = p.parse_args()
    d = parse_word(args.d)
    print(f"{'depth':>5} {'pool':>6} {'delta_sq':>12} {'delta':>12} {'|m|':>5} {'secs':>6}")
    for depth in range(args.max_depth + 1):
        t = time.perf_counter()
        r = so3.approx_search(d, depth)
        print(f"{depth:>5} {r.pool_size:>6} {r.delta_sq_float:>12.4e} {r.delta_sq_float ** 0.5:>12.4e} "
              f"{len(r.word):>5} {time.perf_counter() - t:>6.2f}")
    print("best m:", format_word(r.word))


if __name__ == "__main__":
    main()
