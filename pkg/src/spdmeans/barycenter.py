"""Finitely supported measures on the SPD cone and the Karcher barycentric map."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .config import SolverConfig
from .linalg import as_spd
from .means import WEIGHT_SUM_TOL, _stack, karcher_mean
from .metrics import batch_distances, delta
from .stochastic import rational_counts

MAX_ATOMS = 512
CONTRACTIVITY_SLACK = 1e-8


@dataclass(frozen=True)
class DiscreteMeasure:
    """``sum_k masses[k] * delta_{atoms[k]}``; atoms may repeat."""

    atoms: tuple
    masses: tuple

    def __post_init__(self):
        pts, _ = _stack(self.atoms)
        masses = tuple(float(m) for m in self.masses)
        if len(masses) != len(pts):
            raise ValueError(f"{len(masses)} masses for {len(pts)} atoms")
        if any(m <= 0 for m in masses):
            raise ValueError("masses must be positive")
        if abs(sum(masses) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"masses sum to {sum(masses)!r}, not 1")
        object.__setattr__(self, "atoms", tuple(pts))
        object.__setattr__(self, "masses", masses)

    @classmethod
    def uniform(cls, atoms):
        atoms = list(atoms)
        return cls(tuple(atoms), (1.0 / len(atoms),) * len(atoms))

    @classmethod
    def point_mass(cls, x):
        return cls((as_spd(x),), (1.0,))

    @property
    def dim(self):
        return self.atoms[0].dim

    def __len__(self):
        return len(self.atoms)


def _uniform_indices(mu, max_denominator):
    counts, n = rational_counts(mu.masses, max_denominator)
    return np.repeat(np.arange(len(mu)), counts), n


def uniformize(mu, max_denominator=64):
    """Rewrite ``mu`` as ``N`` equal-mass atoms (with repetitions).

    ``N`` is the least common denominator of the masses, each of which must
    be within ``1e-9`` of a fraction with denominator at most
    ``max_denominator``.
    """
    idx, n = _uniform_indices(mu, max_denominator)
    return DiscreteMeasure(tuple(mu.atoms[i] for i in idx), (1.0 / n,) * n)


def _cost_matrix(xs, ys):
    return np.array([batch_distances(x, np.stack([y.array for y in ys])) for x in xs])


def wasserstein(mu, nu, max_denominator=MAX_ATOMS, *, full_output=False):
    """1-Wasserstein distance between two rational-mass measures.

    Both measures are expanded to ``N = lcm(N_mu, N_nu)`` equal atoms
    (``N <= 512``); the distance is then the minimum over bijections of the
    average Riemannian distance, solved as a linear assignment problem.
    Distances are computed once per distinct atom pair.

    With ``full_output`` the optimal assignment ``(rows, cols)`` over the
    expanded atom lists is returned as well.
    """
    if mu.dim != nu.dim:
        raise ValueError(f"dimension mismatch: {mu.dim} vs {nu.dim}")
    ia, na = _uniform_indices(mu, max_denominator)
    ib, nb = _uniform_indices(nu, max_denominator)
    n = math.lcm(na, nb)
    if n > MAX_ATOMS:
        raise ValueError(f"common atom count {n} exceeds {MAX_ATOMS}")
    ia = np.repeat(ia, n // na)
    ib = np.repeat(ib, n // nb)
    cost = _cost_matrix(mu.atoms, nu.atoms)[np.ix_(ia, ib)]
    rows, cols = linear_sum_assignment(cost)
    d = float(cost[rows, cols].sum() / n)
    return (d, (ia[rows], ib[cols])) if full_output else d


def karcher_barycenter(mu, cfg=None, *, full_output=False):
    """Karcher barycenter: the zero of ``sum_k m_k log(X^{-1/2} A_k X^{-1/2})``."""
    if len(mu) == 1:
        return mu.atoms[0]
    return karcher_mean(mu.atoms, mu.masses, cfg, full_output=full_output)


class ContractivityResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def contractivity_check(mu, nu, cfg=None, slack=CONTRACTIVITY_SLACK):
    """``d(beta(mu), beta(nu)) <= W(mu, nu)`` for the Karcher barycenter ``beta``."""
    cfg = cfg or SolverConfig()
    lhs = delta(karcher_barycenter(mu, cfg), karcher_barycenter(nu, cfg))
    rhs = wasserstein(mu, nu)
    return ContractivityResult(lhs, rhs, lhs <= rhs + slack)


def iterativity_check(points, k, cfg=None):
    """Distance between the uniform Karcher mean of ``points`` and of its ``k``-fold repetition."""
    pts, _ = _stack(points)
    if len(pts) * k > 64:
        raise ValueError("n * k must not exceed 64")
    if len(pts) == 1:
        return 0.0
    return delta(karcher_mean(pts, cfg=cfg), karcher_mean(pts * k, cfg=cfg))


def empirical_expectation(samples, cfg=None):
    """Expectation of an empirical sample: barycenter of its distribution."""
    return karcher_barycenter(DiscreteMeasure.uniform(samples), cfg)
