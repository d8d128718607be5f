#!/usr/bin/env python3
"""Generate the synthetic ve-power holder fixture and print its oracle metrics.

The upstream veCRV snapshot is not bundled. This fixture is a seeded
heavy-tailed stand-in: ve power = balance * lock_remaining / lock_max with
Pareto balances and uniform lock fractions. Metrics are computed with exact
fractions using the pairwise mean-absolute-difference form of the Gini
coefficient and a largest-first majority coalition count.
"""
import argparse
import random
from fractions import Fraction
from pathlib import Path


def generate(n: int, seed: int):
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        balance = rng.paretovariate(1.1) * 1000.0
        lock_weeks = rng.randint(1, 208)
        power = round(balance * lock_weeks / 208, 6)
        rows.append((f"0x{i:04x}", f"{power:.6f}", lock_weeks))
    return rows


def gini(values):
    n = len(values)
    total = sum(values)
    pair_sum = sum(abs(a - b) for a in values for b in values)
    return pair_sum / (2 * n * total)


def nakamoto(values):
    ordered = sorted(values, reverse=True)
    half = sum(values) / 2
    acc = Fraction(0)
    for k, v in enumerate(ordered, start=1):
        acc += v
        if acc > half:
            return k
    raise ValueError("empty distribution")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("data/fixtures/curve_vepower_synthetic.csv"))
    ap.add_argument("--holders", type=int, default=500)
    ap.add_argument("--seed", type=int, default=20240917)
    args = ap.parse_args()

    rows = generate(args.holders, args.seed)
    with args.out.open("w", newline="\n") as f:
        f.write("entity,weight\n")
        for entity, weight, _ in rows:
            f.write(f"{entity},{weight}\n")

    values = [Fraction(w) for _, w, _ in rows]
    g = gini(values)
    print(f"holders={len(values)}")
    print(f"gini_exact={g.numerator}/{g.denominator}")
    print(f"gini={float(g):.15f}")
    print(f"nakamoto={nakamoto(values)}")


if __name__ == "__main__":
    main()
