"""Distance between the ALM and Karcher means, with solver cost.

Prints, per seeded instance, delta(ALM, K), both residuals and wall times.
"""

import argparse
import time

import numpy as np

from spdmeans import alm_mean, delta, karcher_mean
from spdmeans.sampling import random_tuple


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--spread", type=float, default=0.5)
    args = p.parse_args()
    print(f"{'seed':>4} {'delta(ALM,K)':>13} {'ALM diam':>10} {'K resid':>10} {'ALM s':>8} {'K s':>8}")
    for seed in range(args.instances):
        pts = random_tuple(np.random.default_rng([10, seed]), args.n, args.dim, args.spread)
        t0 = time.perf_counter()
        alm = alm_mean(pts, full_output=True)
        t1 = time.perf_counter()
        kar = karcher_mean(pts, full_output=True)
        t2 = time.perf_counter()
        print(f"{seed:>4} {delta(alm.point, kar.point):13.3e} {alm.residual:10.2e} "
              f"{kar.residual:10.2e} {t1 - t0:8.3f} {t2 - t1:8.4f}")


if __name__ == "__main__":
    main()
