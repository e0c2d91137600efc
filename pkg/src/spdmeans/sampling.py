"""Seeded generators of random test matrices."""

from __future__ import annotations

import numpy as np

from .linalg import SpdMatrix, from_eig, sym


def random_symmetric(rng, dim, scale=1.0):
    z = rng.standard_normal((dim, dim))
    return scale * sym(z)


def random_spd(rng, dim, spread=0.5):
    """``exp(spread * G)`` for a random symmetric Gaussian ``G``."""
    w, v = np.linalg.eigh(random_symmetric(rng, dim))
    return SpdMatrix(from_eig(w, v, np.exp(spread * w)))


def random_tuple(rng, n, dim, spread=0.5):
    return [random_spd(rng, dim, spread) for _ in range(n)]


def random_invertible(rng, dim):
    """Gaussian matrix, redrawn until comfortably conditioned."""
    while True:
        m = rng.standard_normal((dim, dim))
        if np.linalg.cond(m) < 1e3:
            return m


def random_psd_below(rng, a, fraction=0.1):
    """A random PSD matrix ``G G^T`` with spectral norm ``fraction * lambda_min(a)``.

    Subtracting it from ``a`` keeps the result positive definite.
    """
    a = SpdMatrix(a)
    g = rng.standard_normal((a.dim, a.dim))
    p = g @ g.T
    return fraction * a.eigenvalues[0] * p / np.linalg.norm(p, 2)


def random_weight(rng, n):
    w = rng.uniform(0.2, 1.0, n)
    return w / w.sum()


def commuting_tuple(rng, n, dim, spread=0.5):
    """Tuple of SPD matrices sharing one random eigenbasis."""
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    return [
        SpdMatrix(from_eig(None, q, np.exp(spread * rng.standard_normal(dim))))
        for _ in range(n)
    ]
