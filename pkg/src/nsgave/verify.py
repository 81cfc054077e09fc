"""Solvability checks for GAVE data and a brute-force reference solver.

``A x + B|x| = b`` is uniquely solvable for every b exactly when
``A + B D`` is nonsingular for every diagonal D with entries in [-1, 1],
equivalently when {A + B, A - B} has the column W-property. The
determinant of ``A + B diag(d)`` is affine in each d_i separately, so on
the box [-1, 1]^n it is a convex combination of its 2^n vertex values:
if all vertex determinants share one strict sign, no interior D is
singular. The vertex matrices are exactly the column representatives of
{A + B, A - B}, which makes the exact check a 2^n determinant sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import GaveProblem, residual
from .errors import DimensionMismatch, DimensionTooLarge, SingularMatrix
from .linalg import (
    as_matrix,
    batched_determinant_sign,
    batched_lu,
    batched_solve,
    extreme_singular_values,
    lu_factor,
)
from .problems import make_rng

MAX_SWEEP_DIM = 22
MAX_ORACLE_DIM = 15
SIGMA_MARGIN = 1e-10

_CHUNK_ENTRIES = 1 << 22  # floats per batched stack
_BATCHED_MAX_DIM = 48


def _pair(m, n) -> tuple[np.ndarray, np.ndarray]:
    m = as_matrix(m, "M")
    n = as_matrix(n, "N")
    if m.shape != n.shape or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"need two square matrices of equal size, got {m.shape} and {n.shape}")
    return m, n


def _patterns(n: int, start: int, stop: int) -> np.ndarray:
    """Rows are boolean masks; bit j of the index selects column j from the second matrix."""
    codes = np.arange(start, stop, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)) & 1).astype(bool)


@dataclass(frozen=True)
class WPropertyReport:
    holds: bool
    n_representatives: int
    sign: int | None = None
    #: column choices of a failing representative (True = column of the second matrix)
    witness: tuple[bool, ...] | None = None
    min_log_abs_det: float = math.nan


def column_w_property(m, n) -> WPropertyReport:
    """Exact column W-property test for the pair {M, N} by full enumeration."""
    m, n = _pair(m, n)
    dim = m.shape[0]
    if dim > MAX_SWEEP_DIM:
        raise DimensionTooLarge(f"exact sweep needs 2^{dim} determinants; limit is n <= {MAX_SWEEP_DIM}")
    total = 1 << dim
    chunk = max(1, min(total, _CHUNK_ENTRIES // max(1, dim * dim)))
    ref_sign = None
    min_log = math.inf
    for start in range(0, total, chunk):
        masks = _patterns(dim, start, min(total, start + chunk))
        reps = np.where(masks[:, None, :], n[None, :, :], m[None, :, :])
        signs, logabs = batched_determinant_sign(reps)
        min_log = min(min_log, float(np.min(logabs)))
        if ref_sign is None:
            ref_sign = int(signs[0])
        bad = np.flatnonzero((signs == 0) | (signs != ref_sign))
        if bad.size:
            return WPropertyReport(False, total, None, tuple(bool(v) for v in masks[bad[0]]), min_log)
    return WPropertyReport(True, total, ref_sign, None, min_log)


def gave_w_property(a, b) -> WPropertyReport:
    """Column W-property of {A + B, A - B}."""
    a, b = _pair(a, b)
    return column_w_property(a + b, a - b)


@dataclass(frozen=True)
class BdSampleReport:
    """Result of sampling ``A + B diag(d)`` over the box [-1, 1]^n.

    ``margin`` is the smallest relative pivot seen (pivot magnitude over
    the largest entry) and ``witness`` the d where it occurred. When two
    samples have determinants of opposite sign, the segment between them
    must cross a singular matrix; it is bisected and the crossing point is
    reported as the witness.
    """

    margin: float
    witness: np.ndarray
    singular: bool
    samples: int
    sign_change: bool = False


def _bd_eval(a: np.ndarray, b: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Relative pivot margin and determinant sign of ``A + B diag(d_k)`` per row d_k."""
    n = a.shape[0]
    if n <= _BATCHED_MAX_DIM:
        f = batched_lu(a[None, :, :] + b[None, :, :] * d[:, None, :])
        diag = np.diagonal(f.lu, axis1=1, axis2=2)
        signs = f.parity * np.where(np.count_nonzero(diag < 0, axis=1) % 2 == 0, 1, -1)
        return np.where(f.singular, 0.0, f.min_rel_pivot), np.where(f.singular, 0, signs)
    margins = np.empty(d.shape[0])
    signs = np.zeros(d.shape[0], dtype=np.int64)
    for k, dk in enumerate(d):
        mat = a + b * dk[None, :]
        try:
            f = lu_factor(mat)
        except SingularMatrix:
            margins[k] = 0.0
            continue
        u = np.diagonal(f.lu)
        margins[k] = float(np.min(np.abs(u))) / float(np.max(np.abs(mat)))
        signs[k] = f.parity * (1 if np.count_nonzero(u < 0) % 2 == 0 else -1)
    return margins, signs


def _bisect_crossing(a, b, d_pos, d_neg, sign_pos, steps: int = 60) -> tuple[np.ndarray, float]:
    lo, hi = d_pos, d_neg
    best_d, best_m = lo, math.inf
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        margins, signs = _bd_eval(a, b, mid[None, :])
        if margins[0] < best_m:
            best_d, best_m = mid, float(margins[0])
        if signs[0] == 0:
            break
        if signs[0] == sign_pos:
            lo = mid
        else:
            hi = mid
    return best_d, best_m


def bd_nonsingularity_sample(a, b, samples: int = 1000, seed=0, candidates=None, batch: int | None = None) -> BdSampleReport:
    """Sample ``A + B diag(d)`` with d uniform in [-1, 1]^n.

    The all-zero d is always included, followed by any ``candidates`` and
    then ``samples`` random draws.
    """
    a, b = _pair(a, b)
    n = a.shape[0]
    rng = make_rng(seed)
    ds = [np.zeros((1, n))]
    if candidates is not None:
        ds.append(np.atleast_2d(np.asarray(candidates, dtype=np.float64)))
    if samples:
        ds.append(rng.uniform(-1.0, 1.0, size=(samples, n)))
    all_d = np.concatenate(ds)
    if batch is None:
        batch = max(1, _CHUNK_ENTRIES // max(1, n * n))

    worst, witness = math.inf, all_d[0]
    ref = None  # (d, sign) of the first nonsingular sample
    for start in range(0, all_d.shape[0], batch):
        d = all_d[start : start + batch]
        margins, signs = _bd_eval(a, b, d)
        i = int(np.argmin(margins))
        if margins[i] < worst:
            worst, witness = float(margins[i]), d[i].copy()
        if worst == 0.0:
            return BdSampleReport(0.0, witness, True, all_d.shape[0])
        if ref is None:
            ref = (d[0].copy(), int(signs[0]))
        flipped = np.flatnonzero(signs != ref[1])
        if flipped.size:
            wd, wm = _bisect_crossing(a, b, ref[0], d[flipped[0]], ref[1])
            return BdSampleReport(min(wm, worst), wd, True, all_d.shape[0], sign_change=True)
    return BdSampleReport(worst, witness, False, all_d.shape[0])


@dataclass(frozen=True)
class SigmaReport:
    holds: bool
    sigma_min_a: float
    sigma_max_b: float

    @property
    def margin(self) -> float:
        return self.sigma_min_a - self.sigma_max_b


def sigma_sufficient_condition(a, b) -> SigmaReport:
    """``sigma_min(A) > sigma_max(B)``, with ties within 1e-10 (relative) counted as failures."""
    a, b = _pair(a, b)
    smin_a, _ = extreme_singular_values(a)
    _, smax_b = extreme_singular_values(b)
    holds = smin_a - smax_b > SIGMA_MARGIN * max(1.0, smax_b)
    return SigmaReport(bool(holds), smin_a, smax_b)


@dataclass
class OracleSolution:
    solutions: list[np.ndarray] = field(default_factory=list)
    #: one entry per solution: every sign pattern (+1/-1 tuple) that produced it
    sign_patterns: list[list[tuple[int, ...]]] = field(default_factory=list)
    singular_patterns: int = 0

    @property
    def count(self) -> int:
        return len(self.solutions)


def sign_enumeration_oracle(p: GaveProblem, sign_tol: float = 1e-12, dedup_tol: float = 1e-9) -> OracleSolution:
    """All solutions of a small GAVE by trying every sign pattern.

    For s in {-1, 1}^n, a solution x of ``(A + B diag(s)) x = b`` with
    ``s_i x_i >= 0`` satisfies ``B diag(s) x = B|x|`` and thus solves the
    GAVE; conversely every GAVE solution arises this way.
    """
    n = p.n
    if n > MAX_ORACLE_DIM:
        raise DimensionTooLarge(f"oracle enumerates 2^{n} patterns; limit is n <= {MAX_ORACLE_DIM}")
    out = OracleSolution()
    total = 1 << n
    chunk = max(1, min(total, _CHUNK_ENTRIES // max(1, n * n)))
    for start in range(0, total, chunk):
        masks = _patterns(n, start, min(total, start + chunk))
        signs = np.where(masks, -1.0, 1.0)
        stack = p.a[None, :, :] + p.b_mat[None, :, :] * signs[:, None, :]
        xs, singular = batched_solve(stack, p.rhs)
        out.singular_patterns += int(np.count_nonzero(singular))
        with np.errstate(invalid="ignore"):
            ok = ~singular & np.all(signs * xs >= -sign_tol, axis=1)
        for i in np.flatnonzero(ok):
            x = xs[i]
            pattern = tuple(int(v) for v in signs[i])
            for j, known in enumerate(out.solutions):
                if np.linalg.norm(x - known) <= dedup_tol * max(1.0, np.linalg.norm(known)):
                    out.sign_patterns[j].append(pattern)
                    break
            else:
                out.solutions.append(x.copy())
                out.sign_patterns.append([pattern])
    return out


def oracle_residual_scale(p: GaveProblem, x) -> float:
    """Scale used to judge oracle residuals: ``||A|| ||x|| + ||B|| ||x|| + ||b||`` (Frobenius)."""
    nx = float(np.linalg.norm(x))
    return float(np.linalg.norm(p.a) * nx + np.linalg.norm(p.b_mat) * nx + np.linalg.norm(p.rhs))


def verify_oracle_solution(p: GaveProblem, sol: OracleSolution, rtol: float = 1e-8) -> bool:
    for x, patterns in zip(sol.solutions, sol.sign_patterns):
        if residual(p, x) > rtol * max(1.0, oracle_residual_scale(p, x)):
            return False
        s = np.asarray(patterns[0], dtype=np.float64)
        if not np.allclose(s * x, np.abs(x), atol=1e-10):
            return False
    return True

