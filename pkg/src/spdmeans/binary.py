"""Two-variable arithmetic, harmonic and geometric means of SPD matrices."""

from __future__ import annotations

import numpy as np

from .config import PropertyCheck, SolverConfig
from .linalg import (
    SpdMatrix,
    _check_dims,
    as_invertible,
    as_spd,
    loewner_leq,
    loewner_margin,
    sym,
)
from .metrics import delta, weighted_geometric
from .sampling import random_psd_below


def geometric_mean(a, b):
    """``a # b``, the midpoint of the geodesic joining ``a`` and ``b``."""
    return weighted_geometric(a, b, 0.5)


def arithmetic_mean(a, b):
    a, b = as_spd(a), as_spd(b)
    _check_dims(a.array, b.array)
    return SpdMatrix(0.5 * (a.array + b.array))


def harmonic_mean(a, b):
    a, b = as_spd(a), as_spd(b)
    _check_dims(a.array, b.array)
    return SpdMatrix(2.0 * SpdMatrix(a.inv().array + b.inv().array).inv().array)


def riccati_residual(x, a, b):
    """Relative residual ``||x a^{-1} x - b||_F / ||b||_F`` of the Riccati equation."""
    x, a, b = as_spd(x), as_spd(a), as_spd(b)
    r = sym(x.array @ a.inv().array @ x.array) - b.array
    return float(np.linalg.norm(r) / np.linalg.norm(b.array))


def _congruent(m, a):
    return SpdMatrix(sym(m @ a.array @ m.T))


def check_basic_properties(a, b, m, cfg=None, seed=0):
    """Numerically check the six basic properties of ``#`` on ``(a, b)``.

    Equalities are scored by the Riemannian distance between both sides and
    pass below ``cfg.check_tol``; order relations are scored by the smallest
    eigenvalue of the difference (negated, clipped at 0) and pass under
    :func:`loewner_leq` with ``cfg.slack``. The dominated pair used for
    monotonicity is built from ``seed``.
    """
    cfg = cfg or SolverConfig()
    a, b = as_spd(a), as_spd(b)
    m = as_invertible(m)
    _check_dims(a.array, b.array, m)
    g = geometric_mean(a, b)
    checks = []

    def equal(name, x, y):
        r = delta(x, y)
        checks.append(PropertyCheck(name, r, r <= cfg.check_tol))

    def ordered(name, pairs):
        r = max(max(0.0, -loewner_margin(x.array, y.array)) for x, y in pairs)
        ok = all(loewner_leq(x.array, y.array, cfg.slack) for x, y in pairs)
        checks.append(PropertyCheck(name, r, ok))

    equal("commutativity", g, geometric_mean(b, a))
    equal("congruence invariance", _congruent(m, g),
          geometric_mean(_congruent(m, a), _congruent(m, b)))
    equal("inversion invariance", g.inv(), geometric_mean(a.inv(), b.inv()))

    rng = np.random.default_rng(seed)
    c = SpdMatrix(a.array - random_psd_below(rng, a))
    d = SpdMatrix(b.array - random_psd_below(rng, b))
    ordered("monotonicity", [(geometric_mean(c, d), g)])

    r = delta(geometric_mean(a, np.eye(a.dim)), a.sqrt())
    if np.linalg.norm(a.array @ b.array - b.array @ a.array) <= 1e-12 * np.linalg.norm(a.array) * np.linalg.norm(b.array):
        r = max(r, delta(g, SpdMatrix(sym(a.array @ b.array)).sqrt()))
    checks.append(PropertyCheck("commuting case", r, r <= cfg.check_tol))

    ordered("AGM inequality", [(harmonic_mean(a, b), g), (g, arithmetic_mean(a, b))])
    return checks
