#!/usr/bin/env python3
"""Run the interval construction over a range of x and write one CSV row each.

Usage: python scripts/theorem_sweep.py [--base 2] [--alpha 0.7] [--side upper]
                                       [--from-exp 20] [--to-exp 34] [--step 1]
"""

import argparse
import csv
import sys
import time

from primedigits.construction import build_instance, run_experiment
from primedigits.errors import ResourceLimitError


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--base", type=int, default=2)
    ap.add_argument("--alpha", type=float, default=0.7, help="alpha (upper) or beta (lower)")
    ap.add_argument("--side", choices=("upper", "lower"), default="upper")
    ap.add_argument("--margin", type=float, default=0.0)
    ap.add_argument("--from-exp", type=int, default=20)
    ap.add_argument("--to-exp", type=int, default=34)
    ap.add_argument("--step", type=int, default=1)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["exp", "k", "l", "primes", "qualifying", "fraction", "ratio", "seconds"])
    prev = None
    for e in range(args.from_exp, args.to_exp + 1, args.step):
        t0 = time.perf_counter()
        try:
            inst = build_instance(args.base, args.base**e, args.alpha, args.side, args.margin)
        except ResourceLimitError as err:
            print(f"# skip exp={e}: {err}", file=sys.stderr)
            continue
        rec = run_experiment(inst)
        w.writerow([e, inst.k, inst.l, rec.primes_in_interval, rec.qualifying_primes,
                    f"{rec.qualifying_fraction:.5f}", f"{rec.ratio:.5f}",
                    f"{time.perf_counter() - t0:.3f}"])
        if prev:
            print(f"# growth {prev} -> {rec.qualifying_primes}: {rec.qualifying_primes / prev:.3f}",
                  file=sys.stderr)
        prev = rec.qualifying_primes or None


if __name__ == "__main__":
    main()
