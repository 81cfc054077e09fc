"""Dense linear-algebra kernel.

Single-matrix factorizations go through LAPACK (``scipy.linalg``) so the
n = 4096 benchmark systems stay cheap. The batched routines at the bottom
are a small vectorized partial-pivoting LU used for the 2**n determinant
sweeps and the sign-enumeration oracle, where thousands of tiny systems
are factorized at once and the singularity threshold has to be applied
identically to every member of the stack.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, DimensionMismatch, SingularMatrix

#: pivots smaller than this times the largest input entry count as zero
PIVOT_RTOL = 1e-14

MAX_SVD_DIM = 5000


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D float64 array (copying only if needed)."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def _require_square(a: np.ndarray, name: str = "matrix") -> int:
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return a.shape[0]


@dataclass(frozen=True)
class LuFactorization:
    """Packed PA = LU factors with LAPACK-style pivot indices.

    ``perm`` lists, for each row of ``L @ U``, the row of the original
    matrix it corresponds to, i.e. ``a[perm] == L @ U``.
    """

    lu: np.ndarray
    piv: np.ndarray
    perm: np.ndarray
    parity: int

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    @property
    def lower(self) -> np.ndarray:
        return np.tril(self.lu, -1) + np.eye(self.n)

    @property
    def upper(self) -> np.ndarray:
        return np.triu(self.lu)

    def reconstruct(self) -> np.ndarray:
        """Multiply the factors back into the original (unpermuted) matrix."""
        out = np.empty_like(self.lu)
        out[self.perm] = self.lower @ self.upper
        return out


def _perm_from_piv(piv: np.ndarray) -> tuple[np.ndarray, int]:
    perm = np.arange(piv.size)
    parity = 1
    for i, p in enumerate(piv):
        if p != i:
            perm[i], perm[p] = perm[p], perm[i]
            parity = -parity
    return perm, parity


def lu_factor(a) -> LuFactorization:
    """Partial-pivoting LU of a square matrix.

    Raises :class:`SingularMatrix` when a pivot magnitude drops below
    ``PIVOT_RTOL * max|a_ij|``.
    """
    a = as_matrix(a)
    n = _require_square(a)
    if n == 0:
        return LuFactorization(np.zeros((0, 0)), np.zeros(0, dtype=int), np.zeros(0, dtype=int), 1)
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        raise SingularMatrix(0, 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diagonal(lu))
    bad = np.flatnonzero(pivots < PIVOT_RTOL * scale)
    if bad.size:
        k = int(bad[0])
        raise SingularMatrix(k, float(pivots[k]))
    perm, parity = _perm_from_piv(piv)
    return LuFactorization(lu, piv, perm, parity)


def lu_solve(f: LuFactorization, rhs) -> np.ndarray:
    rhs = as_vector(rhs, "rhs")
    if rhs.shape[0] != f.n:
        raise DimensionMismatch(f"rhs has length {rhs.shape[0]}, factorization is {f.n}x{f.n}")
    return scipy.linalg.lu_solve((f.lu, f.piv), rhs, check_finite=False)


def solve(a, rhs) -> np.ndarray:
    """Factorize and solve in one call."""
    return lu_solve(lu_factor(a), rhs)


def determinant_sign(a) -> tuple[int, float]:
    """Return ``(sign, log|det|)``; numerically singular input gives ``(0, -inf)``."""
    try:
        f = lu_factor(a)
    except SingularMatrix:
        return 0, -math.inf
    d = np.diagonal(f.lu)
    sign = f.parity * (1 if np.count_nonzero(d < 0) % 2 == 0 else -1)
    return sign, float(np.sum(np.log(np.abs(d))))


def extreme_singular_values(a) -> tuple[float, float]:
    """Smallest and largest singular value of a square matrix."""
    a = as_matrix(a)
    n = _require_square(a)
    if n > MAX_SVD_DIM:
        raise DimensionMismatch(f"dimension {n} exceeds {MAX_SVD_DIM}")
    if n == 0:
        return 0.0, 0.0
    try:
        s = scipy.linalg.svdvals(a, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return float(s[-1]), float(s[0])


def two_norm(v) -> float:
    """Euclidean norm with max-magnitude scaling, so huge entries do not overflow."""
    v = np.asarray(v, dtype=np.float64).ravel()
    if v.size == 0:
        return 0.0
    scale = float(np.max(np.abs(v)))
    if scale == 0.0 or not math.isfinite(scale):
        return scale
    w = v / scale
    return scale * math.sqrt(float(w @ w))


def mat_vec(a, v) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if a.ndim != 2 or v.ndim != 1 or a.shape[1] != v.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {v.shape}")
    return a @ v


# --- batched kernels -------------------------------------------------------


@dataclass(frozen=True)
class BatchedLu:
    lu: np.ndarray  # (k, n, n) packed factors
    perm: np.ndarray  # (k, n) row order, a[i][perm[i]] == L_i U_i
    parity: np.ndarray  # (k,) +1/-1
    singular: np.ndarray  # (k,) bool
    first_bad_pivot: np.ndarray  # (k,) int, -1 when nonsingular
    min_rel_pivot: np.ndarray  # (k,) min |u_jj| / max|a_ij|


def batched_lu(stack) -> BatchedLu:
    """Partial-pivoting LU applied independently to every matrix of a stack.

    Applies the same relative pivot threshold as :func:`lu_factor`.
    """
    a = np.array(stack, dtype=np.float64, copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise DimensionMismatch(f"expected a (k, n, n) stack, got {a.shape}")
    k, n, _ = a.shape
    idx = np.arange(k)
    scale = np.max(np.abs(a), axis=(1, 2)) if n else np.zeros(k)
    thresh = PIVOT_RTOL * scale
    perm = np.tile(np.arange(n), (k, 1))
    parity = np.ones(k, dtype=np.int64)
    singular = scale == 0.0
    first_bad = np.where(singular, 0, -1)
    min_rel = np.full(k, np.inf)
    safe_scale = np.where(scale > 0, scale, 1.0)

    for j in range(n):
        col = np.abs(a[:, j:, j])
        p = np.argmax(col, axis=1) + j
        mag = col[idx, p - j]
        min_rel = np.minimum(min_rel, mag / safe_scale)
        newly_bad = (mag < thresh) | (mag == 0.0)
        first_bad = np.where(newly_bad & (first_bad < 0), j, first_bad)
        singular |= newly_bad

        swap = p != j
        if np.any(swap):
            rows_j = a[idx, j].copy()
            a[idx, j] = a[idx, p]
            a[idx, p] = rows_j
            pj = perm[idx, j].copy()
            perm[idx, j] = perm[idx, p]
            perm[idx, p] = pj
            parity = np.where(swap, -parity, parity)

        if j + 1 < n:
            pivot = np.where(mag == 0.0, 1.0, a[:, j, j])
            l = a[:, j + 1 :, j] / pivot[:, None]
            a[:, j + 1 :, j] = l
            a[:, j + 1 :, j + 1 :] -= l[:, :, None] * a[:, j, None, j + 1 :]

    min_rel = np.where(scale == 0.0, 0.0, min_rel)
    return BatchedLu(a, perm, parity, singular, first_bad, min_rel)


def batched_determinant_sign(stack) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`determinant_sign` over a ``(k, n, n)`` stack."""
    f = batched_lu(stack)
    d = np.diagonal(f.lu, axis1=1, axis2=2)
    neg = np.count_nonzero(d < 0, axis=1) % 2
    sign = f.parity * np.where(neg == 0, 1, -1)
    sign = np.where(f.singular, 0, sign)
    with np.errstate(divide="ignore"):
        logabs = np.sum(np.log(np.abs(d)), axis=1)
    logabs = np.where(f.singular, -np.inf, logabs)
    return sign.astype(np.int64), logabs


def batched_solve(stack, rhs) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``stack[i] @ x[i] = rhs`` for a shared right-hand side.

    Returns ``(x, singular)``; rows of ``x`` for singular members are NaN.
    """
    f = batched_lu(stack)
    rhs = np.asarray(rhs, dtype=np.float64)
    k, n, _ = f.lu.shape
    if rhs.shape != (n,):
        raise DimensionMismatch(f"rhs shape {rhs.shape} does not match stack {f.lu.shape}")
    y = rhs[f.perm]
    for i in range(n):
        if i:
            y[:, i] -= np.einsum("kj,kj->k", f.lu[:, i, :i], y[:, :i])
    x = y
    diag = np.diagonal(f.lu, axis1=1, axis2=2)
    safe = np.where(f.singular[:, None], 1.0, diag)
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[:, i] -= np.einsum("kj,kj->k", f.lu[:, i, i + 1 :], x[:, i + 1 :])
        x[:, i] /= safe[:, i]
    x[f.singular] = np.nan
    return x, f.singular
