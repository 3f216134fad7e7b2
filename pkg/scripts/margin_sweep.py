#!/usr/bin/env python3
"""Qualifying fraction of the constructed interval as the threshold margin grows.

With margin 0 the threshold sits near the median digit sum of the interval,
so roughly half the primes (or fewer) qualify; a positive margin shortens the
free tail and moves the threshold into the bulk.

Usage: python scripts/margin_sweep.py [--base 2] [--x 2**30] [--target 0.4] [--side lower]
"""

import argparse

import numpy as np

from primedigits.construction import build_instance, run_experiment
from primedigits.errors import DomainError, ResourceLimitError


def parse_int(s):
    if "**" in s:
        b, e = s.split("**")
        return int(b) ** int(e)
    return int(s)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--base", type=int, default=2)
    ap.add_argument("--x", type=parse_int, default=2**30)
    ap.add_argument("--target", type=float, default=0.4)
    ap.add_argument("--side", choices=("upper", "lower"), default="lower")
    ap.add_argument("--max-margin", type=float, default=0.12)
    args = ap.parse_args()

    print("margin      l   primes  qualifying  fraction")
    for m in np.round(np.arange(0, args.max_margin + 1e-9, 0.01), 4).tolist():
        try:
            inst = build_instance(args.base, args.x, args.target, args.side, m)
        except (DomainError, ResourceLimitError) as e:
            print(f"{m:6.2f}  -- {e}")
            continue
        rec = run_experiment(inst)
        print(f"{m:6.2f}  {inst.l:5d}  {rec.primes_in_interval:7d}  {rec.qualifying_primes:10d}  "
              f"{rec.qualifying_fraction:8.4f}")


if __name__ == "__main__":
    main()
