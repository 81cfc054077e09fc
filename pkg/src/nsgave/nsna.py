"""Non-monotone smoothing Newton solver for ``A x + B|x| = b``.

The solver works on z = (mu, x) and drives H(z) = (mu, A x + B Phi(mu, x) - b)
to zero. Each iteration

1. solves the perturbed Newton system ``H'(z) dz = -H(z) + beta e1``,
2. takes the full step if it shrinks ||H|| by the factor ``theta``,
3. otherwise backtracks ``alpha = delta**l`` until
   ``M(z + alpha dz) <= C - gamma ||alpha dz||^2`` where M = ||H||^2,
4. updates the running reference ``C <- (C + 1) M / (M + 1)`` and
   ``beta <- gamma C``.

Because the first row of H' is ``[1, 0]`` the mu-component of the direction
is known in closed form (``beta - mu``) and only the n x n block
``A + B diag(v2)`` has to be factorized.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import GaveProblem, Iterate, h_eval, residual
from .errors import InvalidConfig, LineSearchStalled, SingularJacobian, SingularMatrix
from .linalg import lu_factor, lu_solve, two_norm
from .smoothing import jacobian_parts

DEFAULT_GAMMA_RULE = "paper"


def default_gamma(mu0: float, c0: float) -> float:
    """``min(mu0 / (C0 + 1), 1 / (mu0 + 1), 1e-12)``, the benchmark setting.

    The third candidate dominates for any sane inputs, so this is 1e-12 in
    practice.
    """
    return min(mu0 / (c0 + 1.0), 1.0 / (mu0 + 1.0), 1e-12)


@dataclass(frozen=True)
class SolverConfig:
    theta: float = 0.2
    delta: float = 0.8
    mu0: float = 0.01
    gamma: float | str = DEFAULT_GAMMA_RULE
    tol: float = 1e-7
    max_iter: int = 100
    max_backtracks: int = 50
    monotone: bool = False
    check_invariants: bool = True

    def __post_init__(self):
        if not 0 < self.theta < 1:
            raise InvalidConfig(f"theta must lie in (0, 1), got {self.theta}")
        if not 0 < self.delta < 1:
            raise InvalidConfig(f"delta must lie in (0, 1), got {self.delta}")
        if not self.mu0 > 0:
            raise InvalidConfig(f"mu0 must be positive, got {self.mu0}")
        if self.gamma != DEFAULT_GAMMA_RULE:
            if isinstance(self.gamma, str):
                raise InvalidConfig(f"gamma must be a number or {DEFAULT_GAMMA_RULE!r}, got {self.gamma!r}")
            if not 0 < self.gamma < 1:
                raise InvalidConfig(f"gamma must lie in (0, 1), got {self.gamma}")
        if not self.tol > 0:
            raise InvalidConfig(f"tol must be positive, got {self.tol}")
        if self.max_iter < 0 or self.max_backtracks < 0:
            raise InvalidConfig("iteration caps must be non-negative")


@dataclass(frozen=True)
class SolverState:
    """Iterate z = (mu, x) together with the averaged reference value C and beta."""

    k: int
    mu: float
    x: np.ndarray
    c_avg: float
    beta: float
    gamma: float
    merit: float
    lower: np.ndarray = field(repr=False)

    @property
    def iterate(self) -> Iterate:
        return Iterate(self.mu, self.x)


class Direction(NamedTuple):
    d_mu: float
    d_x: np.ndarray

    def norm(self) -> float:
        return math.hypot(self.d_mu, two_norm(self.d_x))


class Trial(NamedTuple):
    """A candidate next iterate and its smoothed residual."""

    mu: float
    x: np.ndarray
    merit: float
    lower: np.ndarray


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    LINE_SEARCH_STALLED = "LineSearchStalled"
    SINGULAR_JACOBIAN = "SingularJacobian"
    INVARIANT_VIOLATION = "InvariantViolation"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class IterationRecord:
    """State at iteration k and the step taken from it.

    The final record of a run has ``step_kind == "stop"`` and no step data.
    """

    k: int
    mu: float
    merit: float
    c_avg: float
    beta: float
    alpha: float | None
    step_kind: str
    res: float
    direction_norm: float | None


@dataclass
class SolveReport:
    status: Status
    x: np.ndarray
    mu: float
    res: float
    iterations: int
    trace: list[IterationRecord]
    wall_time: float
    gamma: float
    violation: str | None = None

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    @property
    def iterate(self) -> Iterate:
        return Iterate(self.mu, self.x)


def _evaluate(p: GaveProblem, mu: float, x: np.ndarray) -> Trial:
    _, lower = h_eval(p, Iterate(mu, x))
    return Trial(mu, x, mu * mu + float(lower @ lower), lower)


def init_state(p: GaveProblem, cfg: SolverConfig, x0=None) -> SolverState:
    x = np.full(p.n, 2.0) if x0 is None else np.array(x0, dtype=np.float64)
    if x.shape != (p.n,):
        raise InvalidConfig(f"x0 has shape {x.shape}, expected ({p.n},)")
    t = _evaluate(p, cfg.mu0, x)
    c0 = t.merit
    gamma = default_gamma(cfg.mu0, c0) if cfg.gamma == DEFAULT_GAMMA_RULE else float(cfg.gamma)
    if not 0 < gamma < 1:
        raise InvalidConfig(f"gamma={gamma} not in (0, 1)")
    beta = gamma * c0
    if not beta < cfg.mu0:
        raise InvalidConfig(f"gamma*C0 = {beta:.6g} must be below mu0 = {cfg.mu0:.6g}")
    if not gamma * cfg.mu0 < 1:
        raise InvalidConfig("gamma*mu0 must be below 1")
    return SolverState(0, float(cfg.mu0), x, c0, beta, gamma, c0, t.lower)


def newton_direction(p: GaveProblem, s: SolverState) -> Direction:
    """Solve the perturbed Newton system through its n x n block."""
    parts = jacobian_parts(s.mu, s.x)
    jac = p.a + p.b_mat * parts.v2_diag[None, :]
    d_mu = s.beta - s.mu
    rhs = -s.lower - (p.b_mat @ parts.v1) * d_mu
    try:
        f = lu_factor(jac)
    except SingularMatrix as exc:
        raise SingularJacobian(exc.pivot, exc.magnitude) from exc
    return Direction(d_mu, lu_solve(f, rhs))


def step_to(p: GaveProblem, s: SolverState, d: Direction, alpha: float) -> Trial:
    """Evaluate z + alpha*dz.

    The mu-component is formed as ``(1 - alpha) mu + alpha beta``, which
    equals ``mu + alpha (beta - mu)`` algebraically but lands exactly on
    beta for the full step instead of cancelling to zero.
    """
    mu = (1.0 - alpha) * s.mu + alpha * s.beta
    return _evaluate(p, mu, s.x + alpha * d.d_x)


def try_full_step(p: GaveProblem, s: SolverState, d: Direction, theta: float) -> tuple[bool, Trial]:
    t = step_to(p, s, d, 1.0)
    return math.sqrt(t.merit) <= theta * math.sqrt(s.merit), t


def line_search(p: GaveProblem, s: SolverState, d: Direction, cfg: SolverConfig) -> tuple[float, Trial]:
    """Largest ``alpha = delta**l`` passing the non-monotone decrease test.

    In monotone mode the reference value is M(z) instead of the average C.
    """
    reference = s.merit if cfg.monotone else s.c_avg
    dn2 = d.norm() ** 2
    for l in range(cfg.max_backtracks + 1):
        alpha = cfg.delta**l
        t = step_to(p, s, d, alpha)
        if t.merit <= reference - s.gamma * alpha * alpha * dn2:
            return alpha, t
    raise LineSearchStalled(cfg.max_backtracks)


def update_averages(s: SolverState, t: Trial) -> SolverState:
    # (C + 1) M / (M + 1) rewritten as M + (C - M) M / (M + 1) so that the
    # computed value never rounds below M.
    m = t.merit
    c_next = m + (s.c_avg - m) * (m / (m + 1.0))
    return SolverState(s.k + 1, t.mu, t.x, c_next, s.gamma * c_next, s.gamma, m, t.lower)


def check_state(s: SolverState) -> str | None:
    if not s.mu > 0:
        return f"mu={s.mu!r} is not positive at k={s.k}"
    if not s.beta < s.mu:
        return f"beta={s.beta!r} >= mu={s.mu!r} at k={s.k}"
    if not s.merit <= s.c_avg:
        return f"merit={s.merit!r} exceeds C={s.c_avg!r} at k={s.k}"
    return None


def check_transition(prev: SolverState, new: SolverState) -> str | None:
    msg = check_state(new)
    if msg:
        return msg
    if not new.c_avg < prev.c_avg:
        return f"C did not decrease from k={prev.k} ({prev.c_avg!r} -> {new.c_avg!r})"
    if not new.mu < prev.mu:
        return f"mu did not decrease from k={prev.k} ({prev.mu!r} -> {new.mu!r})"
    return None


def _record(s: SolverState, res: float, alpha=None, kind="stop", dnorm=None) -> IterationRecord:
    return IterationRecord(s.k, s.mu, s.merit, s.c_avg, s.beta, alpha, kind, res, dnorm)


def solve(p: GaveProblem, cfg: SolverConfig | None = None, x0=None) -> SolveReport:
    """Run the solver from ``x0`` (default all twos) until ``residual <= cfg.tol``.

    Never raises for numerical trouble: singular Jacobians, stalled line
    searches and invariant violations end the run with the matching
    :class:`Status`.
    """
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    s = init_state(p, cfg, x0)
    trace: list[IterationRecord] = []
    violation = check_state(s) if cfg.check_invariants else None
    status = Status.INVARIANT_VIOLATION if violation else None

    while status is None:
        res = residual(p, s.x)
        if res <= cfg.tol:
            status = Status.CONVERGED
            break
        if s.k >= cfg.max_iter:
            status = Status.MAX_ITERATIONS
            break
        try:
            d = newton_direction(p, s)
        except SingularJacobian:
            status = Status.SINGULAR_JACOBIAN
            break
        accepted, t = try_full_step(p, s, d, cfg.theta)
        alpha, kind = 1.0, "full"
        if not accepted:
            try:
                alpha, t = line_search(p, s, d, cfg)
            except LineSearchStalled:
                status = Status.LINE_SEARCH_STALLED
                break
            kind = "line_search"
        trace.append(_record(s, res, alpha, kind, d.norm()))
        new = update_averages(s, t)
        if cfg.check_invariants:
            violation = check_transition(s, new)
            if violation:
                s = new
                status = Status.INVARIANT_VIOLATION
                break
        s = new

    res = residual(p, s.x)
    trace.append(_record(s, res))
    return SolveReport(
        status=status,
        x=s.x,
        mu=s.mu,
        res=res,
        iterations=s.k,
        trace=trace,
        wall_time=time.perf_counter() - start,
        gamma=s.gamma,
        violation=violation,
    )

