#!/usr/bin/env python3
"""Dump convergence-condition traces (C2, C3_SUM, C5) for the bundled
sequences over a geometric n-grid, as plot-ready CSV on stdout.

Usage: python scripts/convergence_traces.py [--max-n 4096]
"""

import argparse

from ddgraphs.presets import NAMED_SEQUENCES
from ddgraphs.probseq import condition_statistic


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4096)
    args = ap.parse_args()

    grid = []
    n = 2
    while n <= args.max_n:
        grid.append(n)
        n *= 2

    print("sequence,n,c2,c3_sum,c5")
    for name, build in sorted(NAMED_SEQUENCES.items()):
        seq = build()
        for n in grid:
            c2 = condition_statistic(seq, n, "C2")
            c3 = condition_statistic(seq, n, "C3_SUM")
            c5 = condition_statistic(seq, n, "C5")
            print(f"{name},{n},{c2:.6g},{c3:.6g},{c5:.6g}")


if __name__ == "__main__":
    main()
