"""Riemannian and Thompson metrics, geodesics, and the semiparallelogram law."""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

from .linalg import SpdMatrix, _check_dims, as_spd, from_eig, sym

NPC_SLACK = 1e-9


class MetricTag(str, enum.Enum):
    RIEMANNIAN = "riemannian"
    THOMPSON = "thompson"


def _relative_log_spectrum(a: SpdMatrix, b):
    """log-eigenvalues of ``a^{-1/2} b a^{-1/2}`` (b may be a stack)."""
    aih = from_eig(a.eigenvalues, a.eigenvectors, 1.0 / np.sqrt(a.eigenvalues))
    c = sym(aih @ np.asarray(b) @ aih)
    return np.log(np.linalg.eigvalsh(c))


def delta(a, b):
    """Riemannian distance ``||log(a^{-1/2} b a^{-1/2})||_F``."""
    a, b = as_spd(a), as_spd(b)
    _check_dims(a.array, b.array)
    return float(np.sqrt(np.sum(_relative_log_spectrum(a, b.array) ** 2)))


def thompson(a, b):
    """Thompson distance ``||log(a^{-1/2} b a^{-1/2})||_op``."""
    a, b = as_spd(a), as_spd(b)
    _check_dims(a.array, b.array)
    return float(np.max(np.abs(_relative_log_spectrum(a, b.array))))


def distance(a, b, metric=MetricTag.RIEMANNIAN):
    metric = MetricTag(metric)
    if metric is MetricTag.THOMPSON:
        return thompson(a, b)
    return delta(a, b)


def batch_distances(a, bs, metric=MetricTag.RIEMANNIAN):
    """Distances from one SPD matrix ``a`` to every matrix in the stack ``bs``."""
    logs = _relative_log_spectrum(as_spd(a), bs)
    if MetricTag(metric) is MetricTag.THOMPSON:
        return np.max(np.abs(logs), axis=-1)
    return np.sqrt(np.sum(logs**2, axis=-1))


def geodesic_from_parts(ah, wc, vc, t):
    """``a^{1/2} c^t a^{1/2}`` from ``a^{1/2}`` and the eigendecomposition of
    the relative matrix ``c = a^{-1/2} b a^{-1/2}``.

    This is the one place the geodesic formula is evaluated. The power is
    taken as ``exp(t log lam)`` for every ``t``.
    """
    ct = from_eig(wc, vc, np.exp(t * np.log(wc)))
    return sym(ah @ ct @ ah)


def geodesic_from_eig(w, v, b, t):
    """``a #_t b`` given the eigendecomposition ``(w, v)`` of ``a``.

    Batched over leading axes of ``w``, ``v`` and ``b``.
    """
    sw = np.sqrt(w)
    ah = from_eig(w, v, sw)
    aih = from_eig(w, v, 1.0 / sw)
    wc, vc = np.linalg.eigh(sym(aih @ b @ aih))
    return geodesic_from_parts(ah, wc, vc, t)


def geodesic(a, b, t):
    """Array-level ``a #_t b`` for stacks of SPD arrays."""
    w, v = np.linalg.eigh(a)
    return geodesic_from_eig(w, v, b, t)


def weighted_geometric(a, b, t):
    """Point at parameter ``t`` on the geodesic from ``a`` to ``b``.

    ``a #_t b = a^{1/2} (a^{-1/2} b a^{-1/2})^t a^{1/2}``, so that
    ``delta(a, a #_t b) = t * delta(a, b)``. The endpoints ``t = 0`` and
    ``t = 1`` return ``a`` and ``b`` unchanged.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    a, b = as_spd(a), as_spd(b)
    _check_dims(a.array, b.array)
    if t == 0:
        return a
    if t == 1:
        return b
    return SpdMatrix(geodesic_from_eig(a.eigenvalues, a.eigenvectors, b.array, t))


class NpcResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def npc_check(x1, x2, x, slack=NPC_SLACK):
    """Evaluate the semiparallelogram inequality at the midpoint of ``x1, x2``.

    ``lhs = d(x1,x2)^2 + 4 d(x,m)^2`` and ``rhs = 2 d(x,x1)^2 + 2 d(x,x2)^2``
    with ``m = x1 # x2``.
    """
    x1, x2, x = as_spd(x1), as_spd(x2), as_spd(x)
    _check_dims(x1.array, x2.array, x.array)
    m = weighted_geometric(x1, x2, 0.5)
    lhs = delta(x1, x2) ** 2 + 4 * delta(x, m) ** 2
    rhs = 2 * delta(x, x1) ** 2 + 2 * delta(x, x2) ** 2
    return NpcResult(lhs, rhs, lhs <= rhs + slack)

