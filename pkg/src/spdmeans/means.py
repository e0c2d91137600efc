"""Multivariable geometric means on the SPD cone.

ALM mean, inductive mean, power means, and the Karcher (least squares)
mean, together with the axiom and Yamazaki checkers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .binary import geometric_mean
from .config import PropertyCheck, SolverConfig, SolverResult
from .linalg import (
    ConvergenceError,
    SpdMatrix,
    as_spd,
    expm,
    from_eig,
    loewner_leq,
    loewner_margin,
    sym,
)
from .metrics import (
    MetricTag,
    delta,
    distance,
    geodesic,
    geodesic_from_eig,
    geodesic_from_parts,
    weighted_geometric,
)
from .sampling import commuting_tuple, random_invertible, random_psd_below, random_symmetric

ALM_MAX_POINTS = 8
WEIGHT_SUM_TOL = 1e-12
ALM_INNER_FACTOR = 0.2


@dataclass(frozen=True)
class Weight:
    """Positive weights in ``(0, 1]`` summing to one."""

    entries: tuple

    def __post_init__(self):
        e = tuple(float(x) for x in self.entries)
        if not e:
            raise ValueError("a weight needs at least one entry")
        if any(not 0 < x <= 1 for x in e):
            raise ValueError(f"weight entries must lie in (0, 1]: {e}")
        if abs(sum(e) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {sum(e)!r}, not 1")
        object.__setattr__(self, "entries", e)

    @classmethod
    def uniform(cls, n):
        return cls((1.0 / n,) * n)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def array(self):
        return np.array(self.entries)

    @property
    def is_uniform(self):
        return all(x == self.entries[0] for x in self.entries)


def as_weight(weights, n):
    if weights is None:
        return Weight.uniform(n)
    w = weights if isinstance(weights, Weight) else Weight(tuple(weights))
    if len(w) != n:
        raise ValueError(f"{len(w)} weights for {n} points")
    return w


@dataclass(frozen=True)
class WeightedTuple:
    weight: Weight
    points: tuple

    def __post_init__(self):
        pts = tuple(as_spd(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weight", as_weight(self.weight, len(pts)))
        _stack(pts)


def _stack(points):
    pts = [as_spd(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    dims = {p.dim for p in pts}
    if len(dims) != 1:
        raise ValueError(f"points have mixed dimensions {sorted(dims)}")
    return pts, np.stack([p.array for p in pts])


def weighted_arithmetic(points, weights=None):
    pts, arr = _stack(points)
    w = as_weight(weights, len(pts))
    return SpdMatrix(np.tensordot(w.array, arr, axes=1))


def weighted_harmonic(points, weights=None):
    pts, _ = _stack(points)
    w = as_weight(weights, len(pts))
    s = sum(wk * p.inv().array for wk, p in zip(w, pts))
    return SpdMatrix(s).inv()


# ---------------------------------------------------------------------------
# ALM mean


def _spread(logs, metric):
    if metric is MetricTag.THOMPSON:
        return np.max(np.abs(logs), axis=-1)
    return np.sqrt(np.sum(logs**2, axis=-1))


def _diameters(pts, metric):
    """Largest pairwise distance within each tuple of the stack ``(B, n, d, d)``."""
    w, v = np.linalg.eigh(pts)
    aih = from_eig(w, v, 1.0 / np.sqrt(w))
    diam = np.zeros(pts.shape[0])
    for i in range(pts.shape[1] - 1):
        c = sym(aih[:, i, None] @ pts[:, i + 1:] @ aih[:, i, None])
        d = _spread(np.log(np.linalg.eigvalsh(c)), metric)
        diam = np.maximum(diam, d.max(axis=1))
    return diam


_PAIRS3 = ((1, 2), (0, 2), (0, 1))


def _alm3_step(pts, metric):
    """Diameters of a stack of triples and their midpoint triples.

    The relative matrices ``x_i^{-1/2} x_j x_i^{-1/2}`` give both the
    pairwise distances and the midpoints, so they are decomposed once.
    """
    w, v = np.linalg.eigh(pts)
    sw = np.sqrt(w)
    ah = from_eig(w, v, sw)
    aih = from_eig(w, v, 1.0 / sw)
    first = [i for i, _ in _PAIRS3]
    second = [j for _, j in _PAIRS3]
    c = sym(aih[:, first] @ pts[:, second] @ aih[:, first])
    wc, vc = np.linalg.eigh(c)
    diam = _spread(np.log(wc), metric).max(axis=1)
    return diam, geodesic_from_parts(ah[:, first], wc, vc, 0.5)


def _alm_batch(pts, tol, cfg, stats):
    """ALM means of every tuple in the stack ``pts`` of shape ``(B, n, d, d)``.

    Tuples are iterated in lockstep; a tuple leaves the active set once its
    diameter is within ``tol``. Sub-means are solved to ``tol * ALM_INNER_FACTOR``:
    each returned sub-mean is only within its own tolerance of the exact
    one, and the outer diameter cannot contract below that error.
    """
    n_batch, n, d = pts.shape[:3]
    if n == 1:
        return pts[:, 0]
    if n == 2:
        return geodesic(pts[:, 0], pts[:, 1], 0.5)
    drop = np.array([[j for j in range(n) if j != i] for i in range(n)])
    pts = pts.copy()
    active = np.arange(n_batch)
    for it in range(cfg.max_iter + 1):
        if n == 3:
            diam, mids = _alm3_step(pts[active], cfg.metric)
        else:
            diam = _diameters(pts[active], cfg.metric)
        if n == stats["n"]:
            stats["iterations"] = it
            stats["diameter"] = float(diam.max())
        keep = diam > tol
        active = active[keep]
        if active.size == 0:
            return pts[:, 0]
        if it == cfg.max_iter:
            raise ConvergenceError(
                f"ALM iteration for {n} points did not converge in {cfg.max_iter} "
                f"iterations (diameter {diam.max():.3e})",
                residual=float(diam.max()),
                iterations=it,
            )
        if n == 3:
            pts[active] = mids[keep]
            continue
        sub = pts[active][:, drop].reshape(-1, n - 1, d, d)
        inner = _alm_batch(sub, tol * ALM_INNER_FACTOR, cfg, stats)
        pts[active] = inner.reshape(active.size, n, d, d)


def alm_mean(points, cfg=None, *, full_output=False):
    """Ando-Li-Mathias mean of ``n <= 8`` points.

    For ``n >= 3`` every point is replaced by the ALM mean of the other
    ``n - 1`` points, simultaneously, until the tuple's diameter (in
    ``cfg.metric``) is at most ``cfg.tol``. The recursion is evaluated on
    stacked arrays so that all sub-means at one depth share a LAPACK call.

    The cost grows roughly like ``n!`` times the product of the per-level
    iteration counts; six points at ``tol=1e-10`` already need tens of
    millions of binary means.
    """
    cfg = cfg or SolverConfig()
    pts, arr = _stack(points)
    n = len(pts)
    if n > ALM_MAX_POINTS:
        raise ValueError(f"ALM mean is limited to {ALM_MAX_POINTS} points, got {n}")
    if n == 1:
        res = SolverResult(pts[0], 0, 0.0)
    elif n == 2:
        res = SolverResult(geometric_mean(pts[0], pts[1]), 0, 0.0)
    else:
        stats = {"n": n, "iterations": 0, "diameter": 0.0}
        x = _alm_batch(arr[None], cfg.tol, cfg, stats)[0]
        res = SolverResult(SpdMatrix(x), stats["iterations"], stats["diameter"])
    return res if full_output else res.point


# ---------------------------------------------------------------------------
# Inductive mean


def inductive_mean(points, weights=None):
    """Inductive mean ``S_k = S_{k-1} #_{1/k} x_k``.

    With weights the step fraction is ``w_k / (w_1 + ... + w_k)``, which
    reduces to ``1/k`` for uniform weights.
    """
    pts, _ = _stack(points)
    if weights is None:
        fractions = [1.0 / (k + 1) for k in range(len(pts))]
    else:
        w = as_weight(weights, len(pts)).array
        fractions = np.minimum(w / np.cumsum(w), 1.0)
    s = pts[0]
    for p, t in zip(pts[1:], fractions[1:]):
        s = weighted_geometric(s, p, float(t))
    return s


# ---------------------------------------------------------------------------
# Power means


def _power_map(x, arr, w, t):
    g = geodesic_from_eig(x.eigenvalues, x.eigenvectors, arr, t)
    return SpdMatrix(np.tensordot(w, g, axes=1))


def power_mean(points, t, weights=None, cfg=None, *, init=None, full_output=False):
    """Weighted power mean ``P_t`` for ``0 < t <= 1``.

    Fixed-point iteration ``X <- sum_k w_k (X #_t A_k)`` started from the
    arithmetic mean (or ``init``). The map is a strict contraction with rate
    ``1 - t`` in the Thompson metric, so iteration stops once the residual
    ``d(X, F(X))`` is at most ``t * cfg.tol``, which bounds the distance to
    the exact solution by ``cfg.tol``. Small ``t`` needs on the order of
    ``log(1/tol) / t`` iterations.
    """
    if not 0 < t <= 1:
        raise ValueError(f"power mean needs 0 < t <= 1, got {t}")
    cfg = cfg or SolverConfig()
    pts, arr = _stack(points)
    w = as_weight(weights, len(pts)).array
    if len(pts) == 1:
        res = SolverResult(pts[0], 0, 0.0)
        return res if full_output else res.point
    x = as_spd(init) if init is not None else SpdMatrix(np.tensordot(w, arr, axes=1))
    for it in range(cfg.max_iter + 1):
        fx = _power_map(x, arr, w, t)
        r = distance(x, fx, cfg.metric)
        if r <= t * cfg.tol:
            break
        if it == cfg.max_iter:
            raise ConvergenceError(
                f"power mean (t={t}) did not converge in {cfg.max_iter} iterations "
                f"(residual {r:.3e})",
                residual=r,
                iterations=it,
            )
        x = fx
    res = SolverResult(x, it, r)
    return res if full_output else res.point


# ---------------------------------------------------------------------------
# Karcher mean


def _karcher_gradient(x, arr, w):
    """``sum_k w_k log(x^{-1/2} A_k x^{-1/2})``, reduced in index order."""
    xih = x.invsqrt().array
    wc, vc = np.linalg.eigh(sym(xih @ arr @ xih))
    return np.tensordot(w, from_eig(wc, vc, np.log(wc)), axes=1)


def karcher_residual(x, points, weights=None):
    """Frobenius norm of the Karcher-equation left-hand side at ``x``."""
    pts, arr = _stack(points)
    w = as_weight(weights, len(pts)).array
    return float(np.linalg.norm(_karcher_gradient(as_spd(x), arr, w)))


def karcher_mean(points, weights=None, cfg=None, *, init=None, full_output=False):
    """Karcher (least squares) mean.

    Solves ``sum_k w_k log(X^{-1/2} A_k X^{-1/2}) = 0`` by the iteration
    ``X <- X^{1/2} exp(h S(X)) X^{1/2}`` from the arithmetic mean, where
    ``S`` is the left-hand side and ``h = cfg.damping``. A step that would
    increase ``||S||_F`` is rejected and ``h`` halved.
    """
    cfg = cfg or SolverConfig()
    pts, arr = _stack(points)
    w = as_weight(weights, len(pts)).array
    if len(pts) == 1:
        res = SolverResult(pts[0], 0, 0.0)
        return res if full_output else res.point
    x = as_spd(init) if init is not None else SpdMatrix(np.tensordot(w, arr, axes=1))
    s = _karcher_gradient(x, arr, w)
    r = float(np.linalg.norm(s))
    h = cfg.damping
    it = 0
    while r > cfg.tol:
        if it == cfg.max_iter:
            raise ConvergenceError(
                f"Karcher iteration did not converge in {cfg.max_iter} iterations "
                f"(residual {r:.3e})",
                residual=r,
                iterations=it,
            )
        it += 1
        xh = x.sqrt().array
        x_new = SpdMatrix(sym(xh @ expm(h * s).array @ xh))
        s_new = _karcher_gradient(x_new, arr, w)
        r_new = float(np.linalg.norm(s_new))
        if r_new > r:
            h *= 0.5
            continue
        x, s, r = x_new, s_new, r_new
    res = SolverResult(x, it, r, {"damping": h})
    return res if full_output else res.point


def karcher_via_power_limit(points, schedule, weights=None, cfg=None):
    """Approximate the Karcher mean by power means along a decreasing schedule.

    Each ``P_t`` is warm-started from the previous one. Returns the power
    mean at the last (smallest) ``t`` and the trace of ``(t, d_T(P_t, K))``
    against the Karcher mean ``K``.
    """
    cfg = cfg or SolverConfig()
    schedule = [float(t) for t in schedule]
    if not schedule or any(not 0 < t <= 1 for t in schedule):
        raise ValueError("schedule values must lie in (0, 1]")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly decreasing")
    target = karcher_mean(points, weights, cfg)
    trace, x = [], None
    for t in schedule:
        x = power_mean(points, t, weights, cfg, init=x)
        trace.append((t, distance(x, target, MetricTag.THOMPSON)))
    return x, trace


# ---------------------------------------------------------------------------
# Axiom and inequality checkers


_MEANS = {
    "karcher": lambda pts, w, cfg: karcher_mean(pts, w, cfg),
    "alm": lambda pts, w, cfg: alm_mean(pts, cfg),
}


def _perturbed(rng, a, size=0.3):
    """``a^{1/2} exp(size G) a^{1/2}`` for random symmetric ``G``."""
    ah = a.sqrt().array
    return SpdMatrix(sym(ah @ expm(random_symmetric(rng, a.dim, size)).array @ ah))


def check_alm_axioms(points, weights=None, mean="karcher", cfg=None, seed=0):
    """Evaluate the ten ALM axioms (weighted forms) for one tuple.

    ``mean`` selects ``"karcher"`` or ``"alm"`` (the latter requires uniform
    weights). Auxiliary data (scalars, congruence factor, a second tuple,
    a dominating tuple, the concavity parameter) are drawn from ``seed``.
    Returns one :class:`PropertyCheck` per axiom.
    """
    cfg = cfg or SolverConfig()
    pts, arr = _stack(points)
    n, dim = len(pts), pts[0].dim
    w = as_weight(weights, n)
    if mean not in _MEANS:
        raise ValueError(f"unknown mean {mean!r}")
    if mean == "alm" and not w.is_uniform:
        raise ValueError("the ALM mean is only defined for uniform weights")
    wa = w.array
    rng = np.random.default_rng(seed)

    def gamma(ps):
        return _MEANS[mean](ps, w, cfg)

    checks = []

    def equal(name, x, y):
        r = delta(x, y)
        checks.append(PropertyCheck(name, r, r <= cfg.check_tol))

    def ordered(name, pairs):
        r = max(max(0.0, -loewner_margin(np.asarray(x), np.asarray(y))) for x, y in pairs)
        ok = all(loewner_leq(np.asarray(x), np.asarray(y), cfg.slack) for x, y in pairs)
        checks.append(PropertyCheck(name, r, ok))

    g = gamma(pts)

    comm = commuting_tuple(rng, n, dim)
    q = comm[0].eigenvectors
    logs = np.array([np.log(np.diag(q.T @ c.array @ q)) for c in comm])
    closed = SpdMatrix(from_eig(None, q, np.exp(wa @ logs)))
    equal("P1 consistency with scalars", gamma(comm), closed)

    scal = np.exp(rng.normal(0.0, 0.5, n))
    lhs = gamma([s * p.array for s, p in zip(scal, pts)])
    equal("P2 joint homogeneity", lhs, SpdMatrix(np.prod(scal**wa) * g.array))

    perm = rng.permutation(n)
    perm_w = wa[perm]
    perm_pts = [pts[i] for i in perm]
    if mean == "alm":
        gp = gamma(perm_pts)
    else:
        gp = karcher_mean(perm_pts, perm_w / perm_w.sum(), cfg)
    equal("P3 permutation invariance", gp, g)

    dom = [SpdMatrix(p.array + random_psd_below(rng, p, 0.5)) for p in pts]
    ordered("P4 monotonicity", [(g, gamma(dom))])

    other = [_perturbed(rng, p) for p in pts]
    g_other = gamma(other)
    lhs5 = delta(g, g_other)
    bound = float(sum(wk * delta(a, b) for wk, a, b in zip(wa, pts, other)))
    r5 = max(0.0, lhs5 - bound)
    checks.append(PropertyCheck("P5 continuity (Lipschitz bound)", r5, r5 <= cfg.check_tol))

    m = random_invertible(rng, dim)
    equal(
        "P6 congruence invariance",
        gamma([sym(m @ p.array @ m.T) for p in pts]),
        SpdMatrix(sym(m @ g.array @ m.T)),
    )

    lam = rng.uniform(0.1, 0.9)
    mix = gamma([lam * a.array + (1 - lam) * b.array for a, b in zip(pts, other)])
    ordered("P7 joint concavity", [(lam * g.array + (1 - lam) * g_other.array, mix)])

    equal("P8 self-duality", gamma([p.inv() for p in pts]).inv(), g)

    r9 = abs(g.logdet() - float(wa @ np.array([p.logdet() for p in pts])))
    checks.append(PropertyCheck("P9 determinant identity", r9, r9 <= cfg.check_tol))

    ordered(
        "P10 AGH inequalities",
        [(weighted_harmonic(pts, w), g), (g, weighted_arithmetic(pts, w))],
    )
    return checks


class YamazakiResult(NamedTuple):
    premise_holds: bool
    conclusion_holds: bool

    @property
    def violated(self):
        return self.premise_holds and not self.conclusion_holds


def yamazaki_check(points, weights=None, cfg=None):
    """Test ``sum_k w_k log A_k <= 0  =>  Karcher mean <= I``."""
    cfg = cfg or SolverConfig()
    pts, _ = _stack(points)
    w = as_weight(weights, len(pts))
    s = sum(wk * p.log() for wk, p in zip(w, pts))
    premise = loewner_leq(s, np.zeros_like(s), cfg.slack)
    lam = karcher_mean(pts, w, cfg)
    conclusion = loewner_leq(lam.array, np.eye(lam.dim), cfg.slack)
    return YamazakiResult(premise, conclusion)
