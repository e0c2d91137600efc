"""Dense real symmetric linear algebra on the cone of SPD matrices.

Everything here works with plain ``numpy`` arrays except :class:`SpdMatrix`,
a validated, immutable wrapper that caches its eigendecomposition so that
square roots, logarithms and powers of the same matrix share one solve.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor

SYMMETRY_RTOL = 1e-12
PD_RTOL = 1e-14
PIVOT_THRESHOLD = 1e-300


class NotSymmetricError(ValueError):
    pass


class NotPositiveDefiniteError(ValueError):
    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap.

    ``residual`` holds the last stopping quantity the solver measured and
    ``iterations`` the number of iterations performed.
    """

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


def _t(a):
    return np.swapaxes(a, -1, -2)


def sym(a):
    """Symmetric part ``(a + a^T) / 2``; works on stacks of matrices."""
    return 0.5 * (a + _t(a))


def from_eig(w, v, fw=None):
    """Recompose ``v diag(fw) v^T`` (batched). ``fw`` defaults to ``w``."""
    if fw is None:
        fw = w
    return sym((v * fw[..., None, :]) @ _t(v))


def as_symmetric(a):
    """Validate a square real matrix as symmetric and return its symmetrization.

    The asymmetry ``max|a - a^T|`` may be at most ``1e-12`` times the largest
    absolute entry.
    """
    arr = np.array(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    scale = np.max(np.abs(arr))
    asym = np.max(np.abs(arr - arr.T))
    if asym > SYMMETRY_RTOL * scale:
        raise NotSymmetricError(
            f"matrix is not symmetric (max asymmetry {asym:.3g}, max entry {scale:.3g})"
        )
    return sym(arr)


def as_invertible(m):
    """Validate ``m`` as a square invertible matrix via an LU factorization."""
    arr = np.array(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, _ = lu_factor(arr, check_finite=True)
    if np.min(np.abs(np.diag(lu))) <= PIVOT_THRESHOLD:
        raise np.linalg.LinAlgError("matrix is singular")
    return arr


def jacobi_eigh(a, tol=1e-13, max_sweeps=30):
    """Cyclic Jacobi eigensolver for a real symmetric matrix.

    Sweeps over all off-diagonal pairs, annihilating each with a plane
    rotation, until the off-diagonal Frobenius norm falls below ``tol``
    times the Frobenius norm of ``a``.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    v : ndarray, shape (n, n)
        Orthonormal eigenvectors, one per column.
    """
    a = as_symmetric(a).copy()
    n = a.shape[0]
    v = np.eye(n)
    total = np.linalg.norm(a)
    for _ in range(max_sweeps + 1):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    # theta would overflow; tan of the rotation angle is ~ apq / diff
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise ConvergenceError(
            f"Jacobi eigensolver did not converge in {max_sweeps} sweeps",
            residual=off / total if total else 0.0,
            iterations=max_sweeps,
        )
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def spectral_decompose(a, method="lapack"):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix.

    ``method`` selects LAPACK's ``syevd`` (through :func:`numpy.linalg.eigh`)
    or the pure-Python cyclic Jacobi solver :func:`jacobi_eigh`.
    """
    if method == "jacobi":
        return jacobi_eigh(a)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    return np.linalg.eigh(as_symmetric(a))


def spectral_projections(a, rtol=1e-10):
    """Group the spectrum into distinct eigenvalues and orthogonal projections.

    Returns a list of ``(eigenvalue, projection)`` pairs such that
    ``a = sum(lam * E for lam, E in result)``. Eigenvalues closer than
    ``rtol`` times the spectral radius are merged.
    """
    w, v = spectral_decompose(a)
    scale = max(np.max(np.abs(w)), 1.0)
    groups = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[groups[-1][0]] <= rtol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    out = []
    for g in groups:
        vg = v[:, g]
        out.append((float(np.mean(w[g])), vg @ vg.T))
    return out


class SpdMatrix:
    """A real symmetric positive definite matrix.

    Construction validates symmetry and positive definiteness (smallest
    eigenvalue above ``dim * 1e-14`` times the largest) and caches the
    eigendecomposition. Instances are immutable.
    """

    __slots__ = ("_a", "_w", "_v")

    def __init__(self, a):
        if isinstance(a, SpdMatrix):
            self._a, self._w, self._v = a._a, a._w, a._v
            return
        arr = as_symmetric(a)
        w, v = np.linalg.eigh(arr)
        n = arr.shape[0]
        if not (w[0] > 0 and w[0] > n * PD_RTOL * w[-1]):
            raise NotPositiveDefiniteError(
                f"matrix is not positive definite (smallest eigenvalue {w[0]:.6g})",
                eigenvalue=float(w[0]),
            )
        for x in (arr, w, v):
            x.setflags(write=False)
        self._a, self._w, self._v = arr, w, v

    @classmethod
    def _from_eig(cls, w, v):
        self = cls.__new__(cls)
        order = np.argsort(w, kind="stable")
        w, v = w[order], v[:, order]
        a = from_eig(w, v)
        for x in (a, w, v):
            x.setflags(write=False)
        self._a, self._w, self._v = a, w, v
        return self

    @property
    def array(self):
        return self._a

    @property
    def dim(self):
        return self._a.shape[0]

    @property
    def eigenvalues(self):
        return self._w

    @property
    def eigenvectors(self):
        return self._v

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._a.copy() if copy else self._a
        return self._a.astype(dtype)

    def __repr__(self):
        return f"SpdMatrix({self._a.tolist()!r})"

    def apply(self, f):
        """``v diag(f(w)) v^T`` as a plain array."""
        return from_eig(self._w, self._v, f(self._w))

    def sqrt(self):
        return SpdMatrix._from_eig(np.sqrt(self._w), self._v)

    def invsqrt(self):
        return SpdMatrix._from_eig(1.0 / np.sqrt(self._w), self._v)

    def inv(self):
        return SpdMatrix._from_eig(1.0 / self._w, self._v)

    def log(self):
        return self.apply(np.log)

    def power(self, p):
        if p == 0.5:
            return self.sqrt()
        if p == 1:
            return self
        return SpdMatrix._from_eig(np.exp(p * np.log(self._w)), self._v)

    def det(self):
        return float(np.prod(self._w))

    def logdet(self):
        return float(np.sum(np.log(self._w)))


def as_spd(a):
    return a if isinstance(a, SpdMatrix) else SpdMatrix(a)


def sqrtm(a):
    return as_spd(a).sqrt()


def invsqrtm(a):
    return as_spd(a).invsqrt()


def logm(a):
    return as_spd(a).log()


def powm(a, p):
    return as_spd(a).power(p)


def expm(s):
    """Exponential of a symmetric matrix; always SPD."""
    w, v = np.linalg.eigh(as_symmetric(s))
    return SpdMatrix._from_eig(np.exp(w), v)


def matrix_function(a, f, p=None):
    """Apply a scalar function to the spectrum.

    ``f`` is one of ``"sqrt"``, ``"log"``, ``"exp"`` or ``"power"`` (the
    latter needs the exponent ``p``). ``"exp"`` accepts any symmetric matrix;
    the others need an SPD input. ``"log"`` returns a plain symmetric array,
    the others an :class:`SpdMatrix`.
    """
    if f == "exp":
        return expm(a)
    if f == "sqrt":
        return sqrtm(a)
    if f == "log":
        return logm(a)
    if f == "power":
        if p is None:
            raise ValueError("power needs an exponent")
        return powm(a, p)
    raise ValueError(f"unknown matrix function {f!r}")


def _check_dims(*mats):
    dims = {np.shape(m)[0] for m in mats}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")


def loewner_leq(a, b, slack=1e-9):
    """``a <= b`` in the Loewner order, up to ``slack * max(1, ||b - a||_op)``."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    _check_dims(a, b)
    w = np.linalg.eigvalsh(sym(b - a))
    return bool(w[0] >= -slack * max(1.0, np.max(np.abs(w))))


def loewner_margin(a, b):
    """Smallest eigenvalue of ``b - a``; non-negative iff ``a <= b``."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    _check_dims(a, b)
    return float(np.linalg.eigvalsh(sym(b - a))[0])


def congruence(m, a):
    """``m a m^T``; positive definiteness is preserved for invertible ``m``."""
    m = as_invertible(m)
    a = as_spd(a)
    _check_dims(m, a.array)
    return SpdMatrix(sym(m @ a.array @ m.T))


def frobenius_norm(a):
    return float(np.linalg.norm(np.asarray(a, dtype=float), "fro"))


def trace(a):
    return float(np.trace(np.asarray(a, dtype=float)))


def determinant(a):
    return as_spd(a).det()
