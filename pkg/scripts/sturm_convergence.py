"""Distance of Sturm's walk to the Karcher mean over many seeds.

Writes one CSV row per checkpoint: step, median, 10th and 90th percentile.
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from spdmeans.sampling import random_tuple
from spdmeans.stochastic import convergence_experiment


@dataclass
class Config:
    dim: int = 3
    n: int = 3
    spread: float = 0.25
    seeds: int = 50
    steps: int = 10_000
    instance_seed: int = 0
    deterministic: bool = False


def run(cfg):
    pts = random_tuple(np.random.default_rng(cfg.instance_seed), cfg.n, cfg.dim, cfg.spread)
    checkpoints = sorted({int(k) for k in np.geomspace(1, cfg.steps, 25)})
    dist = convergence_experiment(pts, range(cfg.seeds), cfg.steps, checkpoints,
                                  deterministic=cfg.deterministic)
    lo, med, hi = np.percentile(dist, [10, 50, 90], axis=0)
    return list(zip(checkpoints, med, lo, hi))


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        kind = (lambda s: s.lower() in ("1", "true", "yes")) if isinstance(default, bool) else type(default)
        p.add_argument(f"--{name.replace('_', '-')}", type=kind, default=default)
    cfg = Config(**vars(p.parse_args()))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["step", "median", "p10", "p90"])
    w.writerows(run(cfg))


if __name__ == "__main__":
    main()
