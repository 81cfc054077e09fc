"""Benchmark instances.

Two HLCP families on an m x m grid (n = m**2), both with
``M = Ahat + xi I`` and ``N = Bhat + zeta I``:

* family 1: ``S = tridiag(-1, 4, -1)``, Ahat block-tridiagonal with S on the
  diagonal and -I on both off-diagonals (symmetric);
* family 2: ``S = tridiag(-1.5, 4, -0.5)``, Ahat with -1.5 I below and
  -0.5 I above the diagonal (nonsymmetric).

``Bhat = blockdiag(S, ..., S)`` in both. The right-hand side is
``q = M z* - N w*`` for the alternating pair z* = (0, 1, 0, 1, ...),
w* = (1, 0, 1, 0, ...), so the GAVE solution is x* = (z* - w*) / 2.

Random instances use numpy's counter-based Philox bit generator seeded
through ``SeedSequence``; the same seed gives bit-identical matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GaveProblem, HlcpProblem, hlcp_to_gave
from .errors import GenerationFailure, OddDimension
from .linalg import extreme_singular_values

#: (family, xi, zeta) cells of the published tables, in table order
TABLE_CELLS = [(1, 0.0, 0.0), (1, 0.0, 4.0), (1, 4.0, 0.0), (2, 0.0, 0.0), (2, 0.0, 4.0), (2, 4.0, 0.0)]
TABLE_BLOCK_DIMS = [16, 32, 48, 64]

_COUPLINGS = {1: (-1.0, -1.0), 2: (-1.5, -0.5)}  # (sub, super)


@dataclass(frozen=True)
class ExampleSpec:
    family: int
    m: int
    xi: float = 0.0
    zeta: float = 0.0

    def __post_init__(self):
        if self.family not in _COUPLINGS:
            raise ValueError(f"family must be 1 or 2, got {self.family}")
        if self.m < 2:
            raise ValueError(f"block dimension must be at least 2, got {self.m}")
        if (self.m * self.m) % 2:
            raise OddDimension(f"n = {self.m}^2 is odd; the known solution needs even n")
        if self.xi < 0 or self.zeta < 0:
            raise ValueError("xi and zeta must be non-negative")

    @property
    def n(self) -> int:
        return self.m * self.m

    @property
    def label(self) -> str:
        return f"ex{self.family} m={self.m} xi={self.xi:g} zeta={self.zeta:g}"


def table_specs(block_dims=TABLE_BLOCK_DIMS) -> list[ExampleSpec]:
    return [ExampleSpec(f, m, xi, zeta) for f, xi, zeta in TABLE_CELLS for m in block_dims]


def tridiag(m: int, sub: float, diag: float, sup: float) -> np.ndarray:
    if m < 1:
        raise ValueError("m must be positive")
    out = np.zeros((m, m))
    i = np.arange(m)
    out[i, i] = diag
    out[i[1:], i[:-1]] = sub
    out[i[:-1], i[1:]] = sup
    return out


def _block_tridiag(s: np.ndarray, sub: float, sup: float) -> np.ndarray:
    m = s.shape[0]
    return np.kron(np.eye(m), s) + np.kron(tridiag(m, sub, 0.0, sup), np.eye(m))


def example_matrices(family: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """``(Ahat, Bhat)`` before the xi/zeta shifts."""
    sub, sup = _COUPLINGS[family]
    s = tridiag(m, sub, 4.0, sup)
    return _block_tridiag(s, sub, sup), np.kron(np.eye(m), s)


def known_solution(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n % 2:
        raise OddDimension(f"n must be even, got {n}")
    z = np.tile([0.0, 1.0], n // 2)
    return z, 1.0 - z


def example_hlcp(spec: ExampleSpec) -> HlcpProblem:
    a_hat, b_hat = example_matrices(spec.family, spec.m)
    n = spec.n
    idx = np.arange(n)
    m_mat, n_mat = a_hat, b_hat
    m_mat[idx, idx] += spec.xi
    n_mat[idx, idx] += spec.zeta
    z, w = known_solution(n)
    return HlcpProblem(m_mat, n_mat, m_mat @ z - n_mat @ w)


def example_gave(spec: ExampleSpec) -> GaveProblem:
    return hlcp_to_gave(example_hlcp(spec))


def make_rng(seed) -> np.random.Generator:
    """Philox generator; ``seed`` is an int or a sequence of ints."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def random_solvable_gave(n: int, seed, max_attempts: int = 100) -> GaveProblem:
    """Random GAVE with ``sigma_min(A) > sigma_max(B)``, hence uniquely solvable."""
    rng = make_rng(seed)
    b_mat = rng.uniform(-1.0, 1.0, size=(n, n))
    r = rng.uniform(-0.3, 0.3, size=(n, n))
    rhs = rng.uniform(-5.0, 5.0, size=n)
    _, smax_b = extreme_singular_values(b_mat)
    shift = (smax_b + 1.0) * np.eye(n)
    for _ in range(max_attempts):
        a = r + shift
        smin_a, _ = extreme_singular_values(a)
        if smin_a > smax_b:
            return GaveProblem(a, b_mat, rhs)
        r = 0.5 * r
    raise GenerationFailure(f"no admissible A after {max_attempts} attempts (n={n})")
