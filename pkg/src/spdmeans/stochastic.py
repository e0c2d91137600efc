"""Inductive-mean walks: Sturm's random walk and a cyclic deterministic walk.

A walk over points ``x_1..x_n`` starts at ``sigma(1) = x_{omega(1)}`` and
moves ``sigma(k) = sigma(k-1) #_{1/k} x_{omega(k)}``. With ``omega`` drawn
i.i.d. from the weights, ``sigma(k)`` converges to the weighted Karcher mean
almost surely.

Point indices are 0-based internally; :class:`WalkTrace` reports the
realized sequence 1-based, as ``omega(k)`` in ``1..n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import SolverConfig
from .linalg import SpdMatrix, loewner_leq, loewner_margin
from .means import WeightedTuple, _stack, as_weight, karcher_mean
from .metrics import batch_distances, geodesic


class IndexSampler:
    """I.i.d. index draws from a weight vector, reproducible across platforms.

    Uses the PCG64 generator (``numpy.random.PCG64``, seeded through
    ``SeedSequence``). Each draw takes one raw 64-bit output, keeps the top
    53 bits as a double ``u`` in ``[0, 1)`` and returns the first index whose
    cumulative weight exceeds ``u``. A ``u`` beyond the last cumulative
    weight (possible only through rounding of the cumulative sum) is
    rejected and redrawn.
    """

    def __init__(self, weights, seed):
        self.cum = np.cumsum(np.asarray(weights, dtype=float))
        self.bitgen = np.random.PCG64(seed)

    def draw(self, size):
        out = np.empty(size, dtype=np.int64)
        filled = 0
        while filled < size:
            raw = self.bitgen.random_raw(size - filled)
            u = (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53
            idx = np.searchsorted(self.cum, u, side="right")
            idx = idx[idx < len(self.cum)]
            out[filled:filled + idx.size] = idx
            filled += idx.size
        return out


@dataclass
class WalkTrace:
    """Realized index sequence (1-based) and the walk's state at each checkpoint.

    ``distances`` is filled when the walk was given a target, ``points``
    when full-point storage was requested; the other is ``None``.
    """

    indices: np.ndarray
    steps: list
    weight: tuple
    seed: int | None = None
    distances: list | None = None
    points: list | None = None
    final: np.ndarray | None = field(default=None, repr=False)

    def to_rows(self):
        """Rows for CSV export: ``(step, distance)`` or ``(step, m00, m01, ...)``."""
        if self.distances is not None:
            return [(k, d) for k, d in zip(self.steps, self.distances)]
        return [(k, *np.asarray(p).ravel()) for k, p in zip(self.steps, self.points)]

    def header(self):
        if self.distances is not None:
            return ["step", "distance_to_target"]
        d = np.asarray(self.points[0]).shape[0]
        return ["step"] + [f"m{i}{j}" for i in range(d) for j in range(d)]


def _checkpoints(steps, checkpoints):
    if checkpoints is None:
        return list(range(1, steps + 1))
    cps = sorted(set(int(k) for k in checkpoints))
    if cps and (cps[0] < 1 or cps[-1] > steps):
        raise ValueError(f"checkpoints must lie in 1..{steps}")
    return cps


def _run(arr, omega, checkpoints, target, store_points):
    """Drive one walk through the indices ``omega``; record at ``checkpoints``."""
    cps = set(checkpoints)
    distances = [] if target is not None else None
    points = [] if store_points else None
    sigma = arr[omega[0]]
    for k in range(1, len(omega) + 1):
        if k > 1:
            sigma = geodesic(sigma, arr[omega[k - 1]], 1.0 / k)
        if k in cps:
            if distances is not None:
                distances.append(float(batch_distances(target, sigma[None])[0]))
            if points is not None:
                points.append(sigma.copy())
    return sigma, distances, points


def sturm_walk(points, steps, seed, weights=None, checkpoints=None, target=None,
               store_points=None):
    """Sturm's stochastic walk with i.i.d. indices drawn from ``weights``.

    Records the distance to ``target`` at each checkpoint when a target is
    given, and the full point when ``store_points`` is true (the default
    when no target is given). Checkpoints default to every step.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    pts, arr = _stack(points)
    w = as_weight(weights, len(pts))
    omega = IndexSampler(w.array, seed).draw(steps)
    return _trace(arr, omega, w, seed, steps, checkpoints, target, store_points)


def _trace(arr, omega, w, seed, steps, checkpoints, target, store_points):
    cps = _checkpoints(steps, checkpoints)
    if store_points is None:
        store_points = target is None
    if target is not None:
        target = SpdMatrix(target)
    final, distances, pts = _run(arr, omega, cps, target, store_points)
    return WalkTrace(omega + 1, cps, tuple(w), seed, distances, pts, final)


def rational_counts(masses, max_denominator=64, tol=1e-9):
    """Integer counts ``c`` and common denominator ``N`` with ``masses ~ c / N``.

    Every mass must be within ``tol`` of a fraction whose denominator is at
    most ``max_denominator``, and the least common denominator ``N`` may not
    exceed ``max_denominator`` either.
    """
    fracs = []
    for m in masses:
        f = Fraction(float(m)).limit_denominator(max_denominator)
        if abs(float(f) - m) > tol:
            raise ValueError(f"mass {m!r} is not a fraction with denominator <= {max_denominator}")
        fracs.append(f)
    den = math.lcm(*(f.denominator for f in fracs))
    if den > max_denominator:
        raise ValueError(f"common denominator {den} exceeds {max_denominator}")
    counts = [int(f * den) for f in fracs]
    if sum(counts) != den:
        raise ValueError("masses do not sum to one")
    return counts, den


def cyclic_block(weights, max_denominator=64):
    """One period of the deterministic index sequence: index ``k`` repeated ``w_k D`` times."""
    counts, _ = rational_counts(weights, max_denominator)
    return np.repeat(np.arange(len(counts)), counts)


def deterministic_walk(points, steps, weights=None, checkpoints=None, target=None,
                       store_points=None):
    """Inductive-mean walk with ``omega`` cycling through :func:`cyclic_block`."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    pts, arr = _stack(points)
    w = as_weight(weights, len(pts))
    block = cyclic_block(w.entries)
    omega = np.resize(block, steps)
    return _trace(arr, omega, w, None, steps, checkpoints, target, store_points)


@dataclass
class MonotonicityReport:
    steps: list
    margins: list
    passed: list
    final_margin: float
    final_passed: bool

    @property
    def all_passed(self):
        return all(self.passed) and self.final_passed


def monotonicity_experiment(lower, upper, steps, seed, cfg=None, checkpoints=None):
    """Coupled walks on a dominated pair of weighted tuples.

    ``lower`` and ``upper`` must share their weight and satisfy
    ``A_i <= B_i`` for every ``i``. Both walks consume the same index
    sequence; at every checkpoint ``sigma_A(k) <= sigma_B(k)`` is tested,
    and finally ``Karcher(A) <= Karcher(B)``. Margins are the smallest
    eigenvalue of the difference.
    """
    cfg = cfg or SolverConfig()
    lower = lower if isinstance(lower, WeightedTuple) else WeightedTuple(None, lower)
    upper = upper if isinstance(upper, WeightedTuple) else WeightedTuple(None, upper)
    if lower.weight != upper.weight or len(lower.points) != len(upper.points):
        raise ValueError("coupled walks need tuples with the same weight")
    for a, b in zip(lower.points, upper.points):
        if not loewner_leq(a.array, b.array, cfg.slack):
            raise ValueError("lower tuple is not dominated by upper tuple")
    cps = _checkpoints(steps, checkpoints)
    omega = IndexSampler(lower.weight.array, seed).draw(steps)
    _, arr_a = _stack(lower.points)
    _, arr_b = _stack(upper.points)
    _, _, pa = _run(arr_a, omega, cps, None, True)
    _, _, pb = _run(arr_b, omega, cps, None, True)
    margins = [loewner_margin(x, y) for x, y in zip(pa, pb)]
    passed = [loewner_leq(x, y, cfg.slack) for x, y in zip(pa, pb)]
    ka = karcher_mean(lower.points, lower.weight, cfg).array
    kb = karcher_mean(upper.points, upper.weight, cfg).array
    return MonotonicityReport(cps, margins, passed, loewner_margin(ka, kb),
                              loewner_leq(ka, kb, cfg.slack))


def convergence_experiment(points, seeds, steps, checkpoints, weights=None, cfg=None,
                           deterministic=False):
    """Distances to the Karcher mean at ``checkpoints``, one row per seed.

    Seeds are processed in the given order, so the returned array is
    independent of how the caller schedules work.
    """
    target = karcher_mean(points, weights, cfg)
    rows = []
    if deterministic:
        tr = deterministic_walk(points, steps, weights, checkpoints, target)
        return np.array([tr.distances])
    for s in seeds:
        tr = sturm_walk(points, steps, s, weights, checkpoints, target)
        rows.append(tr.distances)
    return np.array(rows)
