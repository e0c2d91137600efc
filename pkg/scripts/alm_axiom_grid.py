"""Axiom checks for the ALM mean over the full 20-trial grid, without a time budget.

Trial i uses dimension (2, 3, 5)[i % 3] and tuple size (3, 4, 6)[(i // 3) % 3],
the same instances as the acceptance test. Prints one line per trial with its
wall time and worst residual, then the merged table. Expect hours in total:
each six-point trial needs nine ALM means.
"""

import argparse
import time

import numpy as np

from spdmeans import check_alm_axioms
from spdmeans.cli import _merge
from spdmeans.config import format_checks
from spdmeans.sampling import random_tuple, random_weight


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--mean", choices=["alm", "karcher"], default="alm")
    args = p.parse_args()
    rows = []
    for i in range(args.trials):
        rng = np.random.default_rng([2, i])
        dim, n = (2, 3, 5)[i % 3], (3, 4, 6)[(i // 3) % 3]
        pts = random_tuple(rng, n, dim)
        w = random_weight(rng, n) if args.mean == "karcher" else None
        start = time.perf_counter()
        checks = check_alm_axioms(pts, w, mean=args.mean, seed=i)
        worst = max(c.residual for c in checks)
        ok = all(c.passed for c in checks)
        print(f"trial {i:>2} dim {dim} n {n}: {time.perf_counter() - start:8.1f}s "
              f"worst residual {worst:.2e} {'pass' if ok else 'FAIL'}", flush=True)
        rows += checks
    print(format_checks(_merge(rows)))


if __name__ == "__main__":
    main()
