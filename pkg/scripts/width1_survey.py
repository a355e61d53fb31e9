"""Survey all single-binary-relation templates on n elements.

Counts templates with width 1, with a cyclic polymorphism of arity 2 and 3,
and records b for each. Usage: python scripts/width1_survey.py -n 3
"""
import argparse
import itertools
from collections import Counter

from csplab.btlab import compute_b
from csplab.polywidth import cyclic_polymorphism, width1_witness
from csplab.structures import make_structure


def main():
    p = argparse.ArgumentParser()
    p.add_argument("-n", type=int, default=3)
    args = p.parse_args()
    vs = [str(i) for i in range(args.n)]
    pairs = list(itertools.product(vs, vs))
    stats = Counter()
    bs = Counter()
    for mask in range(1 << len(pairs)):
        a = make_structure([("E", 2)], vs, {"E": [q for i, q in enumerate(pairs) if mask >> i & 1]})
        w1 = width1_witness(a) is not None
        c2 = cyclic_polymorphism(a, 2) is not None
        c3 = cyclic_polymorphism(a, 3) is not None
        stats[(w1, c2, c3)] += 1
        bs[compute_b(a)[0]] += 1
    print(f"templates: {1 << len(pairs)}")
    print(f"{'width1':>7} {'cyc2':>5} {'cyc3':>5} {'count':>6}")
    for (w1, c2, c3), n in sorted(stats.items()):
        print(f"{w1!s:>7} {c2!s:>5} {c3!s:>5} {n:>6}")
    print("b distribution:", dict(sorted(bs.items())))


if __name__ == "__main__":
    main()
