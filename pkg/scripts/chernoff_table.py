#!/usr/bin/env python3
"""Exact tail proportion against the three Chernoff-type bounds.

Prints q, k, a, exact, refined (optimal tilt), explicit-tilt bound and the
lemma bound as CSV.
"""

import csv
import sys

from primedigits import chernoff
from primedigits.digits import build_distribution, tail_proportion

w = csv.writer(sys.stdout, lineterminator="\n")
w.writerow(["q", "k", "a", "exact", "refined", "explicit", "lemma"])
for q in (2, 3, 5, 10):
    for k in (10, 20, 40, 80, 160):
        dist = build_distribution(q, k)
        for a in (0.55, 0.6, 0.7, 0.8, 0.9):
            w.writerow([
                q, k, a,
                f"{tail_proportion(dist, a):.6e}",
                f"{chernoff.refined_bound(q, k, a):.6e}",
                f"{chernoff.explicit_bound(q, k, a):.6e}",
                f"{chernoff.lemma_bound(q, k, a):.6e}",
            ])
