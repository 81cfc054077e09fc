"""Problem data model: GAVE and HLCP instances and the smoothed system H(z).

A GAVE instance asks for x with ``A x + B |x| - b = 0``. The smoothed
system replaces |x| by Phi(mu, x) and appends mu itself as the first
component:

    H(mu, x) = (mu, A x + B Phi(mu, x) - b)

so that H = 0 exactly when mu = 0 and x solves the GAVE.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .linalg import as_matrix, as_vector, two_norm
from .smoothing import jacobian_parts, phi_vec


@dataclass(frozen=True)
class GaveProblem:
    """Data ``(A, B, b)`` of ``A x + B|x| - b = 0``.

    An all-zero ``B`` is rejected unless ``allow_zero_b`` is set; HLCP
    conversion with ``M == N`` legitimately produces one and marks the
    instance ``degenerate``.
    """

    a: np.ndarray
    b_mat: np.ndarray
    rhs: np.ndarray
    allow_zero_b: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        a = as_matrix(self.a, "A").copy()
        b_mat = as_matrix(self.b_mat, "B").copy()
        rhs = as_vector(self.rhs, "b").copy()
        n = rhs.shape[0]
        if a.shape != (n, n) or b_mat.shape != (n, n):
            raise DimensionMismatch(
                f"A {a.shape} and B {b_mat.shape} must be square of size len(b)={n}"
            )
        if not self.allow_zero_b and not np.any(b_mat):
            raise ValueError("B must not be identically zero")
        for arr in (a, b_mat, rhs):
            arr.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b_mat", b_mat)
        object.__setattr__(self, "rhs", rhs)

    @property
    def n(self) -> int:
        return self.rhs.shape[0]

    @property
    def degenerate(self) -> bool:
        """True when B is identically zero (a plain linear system)."""
        return not np.any(self.b_mat)

    def __eq__(self, other):
        if not isinstance(other, GaveProblem):
            return NotImplemented
        return (
            np.array_equal(self.a, other.a)
            and np.array_equal(self.b_mat, other.b_mat)
            and np.array_equal(self.rhs, other.rhs)
        )

    __hash__ = None


@dataclass(frozen=True)
class HlcpProblem:
    """Find z, w >= 0 with ``M z - N w = q`` and ``z.w = 0``."""

    m_mat: np.ndarray
    n_mat: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        m_mat = as_matrix(self.m_mat, "M")
        n_mat = as_matrix(self.n_mat, "N")
        q = as_vector(self.q, "q")
        n = q.shape[0]
        if m_mat.shape != (n, n) or n_mat.shape != (n, n):
            raise DimensionMismatch(f"M {m_mat.shape} and N {n_mat.shape} must be {n}x{n}")
        object.__setattr__(self, "m_mat", m_mat)
        object.__setattr__(self, "n_mat", n_mat)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    def __eq__(self, other):
        if not isinstance(other, HlcpProblem):
            return NotImplemented
        return (
            np.array_equal(self.m_mat, other.m_mat)
            and np.array_equal(self.n_mat, other.n_mat)
            and np.array_equal(self.q, other.q)
        )

    __hash__ = None


@dataclass(frozen=True)
class Iterate:
    mu: float
    x: np.ndarray


@dataclass(frozen=True)
class HlcpSolution:
    z: np.ndarray
    w: np.ndarray

    def complementarity_gap(self) -> float:
        return abs(float(self.z @ self.w))

    def is_feasible(self, tol: float = 1e-10) -> bool:
        """Sign and complementarity conditions, ignoring the linear equation."""
        return bool(
            np.all(self.z >= -tol)
            and np.all(self.w >= -tol)
            and self.complementarity_gap() <= tol * (1 + two_norm(self.z) * two_norm(self.w))
        )


def _check_x(p: GaveProblem, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (p.n,):
        raise DimensionMismatch(f"x has shape {x.shape}, problem has n={p.n}")
    return x


def gave_residual_vector(p: GaveProblem, x) -> np.ndarray:
    x = _check_x(p, x)
    return p.a @ x + p.b_mat @ np.abs(x) - p.rhs


def residual(p: GaveProblem, x) -> float:
    """Unsmoothed residual ``||A x + B|x| - b||_2``."""
    return two_norm(gave_residual_vector(p, x))


def h_eval(p: GaveProblem, z: Iterate) -> tuple[float, np.ndarray]:
    """Evaluate H(z) as ``(mu, A x + B Phi(mu, x) - b)``."""
    x = _check_x(p, z.x)
    return float(z.mu), p.a @ x + p.b_mat @ phi_vec(z.mu, x) - p.rhs


def merit(p: GaveProblem, z: Iterate) -> float:
    """``||H(z)||^2``."""
    mu, lower = h_eval(p, z)
    return mu * mu + float(lower @ lower)


def reduced_newton_matrix(p: GaveProblem, z: Iterate) -> np.ndarray:
    """Lower-right block ``A + B diag(v2)`` of the Jacobian of H."""
    parts = jacobian_parts(z.mu, _check_x(p, z.x))
    return p.a + p.b_mat * parts.v2_diag[None, :]


def full_jacobian(p: GaveProblem, z: Iterate) -> np.ndarray:
    """The full ``(n+1) x (n+1)`` Jacobian of H; used for cross-checks."""
    parts = jacobian_parts(z.mu, _check_x(p, z.x))
    n = p.n
    jac = np.zeros((n + 1, n + 1))
    jac[0, 0] = 1.0
    jac[1:, 0] = p.b_mat @ parts.v1
    jac[1:, 1:] = p.a + p.b_mat * parts.v2_diag[None, :]
    return jac


def hlcp_to_gave(h: HlcpProblem) -> GaveProblem:
    """GAVE with ``A = M + N``, ``B = M - N``, ``b = q``.

    Solutions correspond through ``x = (z - w) / 2``.
    """
    return GaveProblem(h.m_mat + h.n_mat, h.m_mat - h.n_mat, h.q.copy(), allow_zero_b=True)


def gave_solution_to_hlcp(x) -> HlcpSolution:
    """Recover ``z = |x| + x`` and ``w = |x| - x``, so ``M z - N w = A x + B |x|``."""
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    return HlcpSolution(ax + x, ax - x)


def hlcp_residual(h: HlcpProblem, sol: HlcpSolution) -> float:
    return two_norm(h.m_mat @ sol.z - h.n_mat @ sol.w - h.q)
