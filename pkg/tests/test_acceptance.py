"""Acceptance criteria; each test carries a ``criterion`` marker and the
terminal summary prints one pass/fail line per criterion."""

import math
import time
from dataclasses import replace

import numpy as np
import pytest

from nsgave.bench import PUBLISHED_ITER, oracle_compare
from nsgave.core import GaveProblem, Iterate, full_jacobian, h_eval, reduced_newton_matrix
from nsgave.linalg import determinant_sign, solve as dense_solve
from nsgave.nsna import SolverConfig, Status, init_state, newton_direction
from nsgave.problems import TABLE_BLOCK_DIMS, TABLE_CELLS, ExampleSpec, make_rng
from nsgave.smoothing import phi, phi_partials
from nsgave.trace import check_trace
from nsgave.verify import column_w_property, sigma_sufficient_condition

PAIR_A = np.array([[1001.0, -496.0], [-994.0, 501.0]])
PAIR_B = np.array([[999.0, -494.0], [-995.0, 499.0]])

TABLE_CASES = [(cell, i, m) for cell in TABLE_CELLS for i, m in enumerate(TABLE_BLOCK_DIMS)]


def _case_id(case):
    (family, xi, zeta), _, m = case
    return f"ex{family}-xi{xi:g}-zeta{zeta:g}-n{m * m}"


@pytest.fixture(scope="module")
def oracle_sweep():
    start = time.perf_counter()
    res = oracle_compare(2, 10, 200, seed=2024, cfg=SolverConfig(), keep_reports=True)
    return res, time.perf_counter() - start


# -- 1. table reproduction ---------------------------------------------------


@pytest.mark.criterion(1, "table reproduction (Iter within 1, Res <= 1e-7, n=4096 under 10 min)")
@pytest.mark.parametrize("case", TABLE_CASES, ids=_case_id)
def test_table_iterations(case, table_runs):
    (family, xi, zeta), i, m = case
    spec = ExampleSpec(family, m, xi, zeta)
    result = table_runs[spec]
    expected = PUBLISHED_ITER[(family, xi, zeta)][i]
    report = result.report
    print(f"{spec.label}: iter={report.iterations} (published {expected}) res={report.res:.3e} time={report.wall_time:.2f}s")
    assert report.status is Status.CONVERGED
    assert report.res <= 1e-7
    assert abs(report.iterations - expected) <= 1
    if spec.n == 4096:
        assert report.wall_time < 600.0


# -- 2. oracle equivalence ---------------------------------------------------


@pytest.mark.criterion(2, "oracle equivalence (200 instances, n=2..10, dev <= 1e-6, <= 60 s)")
def test_oracle_equivalence(oracle_sweep):
    res, elapsed = oracle_sweep
    print(res.summary(), f"elapsed {elapsed:.2f}s")
    assert res.count == 200
    assert res.oracle_solution_counts == [1] * 200
    assert res.mismatches == []
    assert res.max_deviation <= 1e-6
    assert elapsed <= 60.0


# -- 3. invariants -----------------------------------------------------------


@pytest.mark.criterion(3, "algorithm invariants across all benchmark and oracle runs")
def test_invariants_benchmark_runs(table_runs):
    violations = []
    for spec, result in table_runs.items():
        violations += [f"{spec.label}: {v}" for v in check_trace(result.report.trace, delta=0.8)]
        assert result.report.violation is None
    assert violations == []


@pytest.mark.criterion(3, "algorithm invariants across all benchmark and oracle runs")
def test_invariants_oracle_runs(oracle_sweep):
    res, _ = oracle_sweep
    violations = []
    for i, report in enumerate(res.reports):
        violations += [f"instance {i}: {v}" for v in check_trace(report.trace, delta=0.8)]
        assert report.violation is None
    assert violations == []


# -- 4. smoothing properties -------------------------------------------------

N_POINTS = 100_000


@pytest.fixture(scope="module")
def points():
    rng = make_rng(4)
    scale = 10.0 ** rng.uniform(-3, 3, size=(4, N_POINTS))
    signs = rng.choice([-1.0, 1.0], size=(4, N_POINTS))
    return scale * signs


@pytest.mark.criterion(4, "smoothing properties over 1e5 random points")
def test_phi_at_zero_mu_is_abs(points):
    x = points[0]
    assert np.array_equal(phi(0.0, x), np.abs(x))


@pytest.mark.criterion(4, "smoothing properties over 1e5 random points")
def test_phi_bounds(points):
    mu, x = np.abs(points[0]), points[1]
    val = phi(mu, x)
    slack = 4 * np.finfo(float).eps * (np.abs(x) + mu)
    assert np.all(val <= np.abs(x) + slack)
    assert np.all(val >= np.abs(x) - mu - slack)


@pytest.mark.criterion(4, "smoothing properties over 1e5 random points")
def test_phi_lipschitz(points):
    mu1, x1, mu2, x2 = points
    lhs = np.abs(phi(mu1, x1) - phi(mu2, x2))
    rhs = 2.0 * np.hypot(mu1 - mu2, x1 - x2)
    slack = 8 * np.finfo(float).eps * (np.hypot(mu1, x1) + np.hypot(mu2, x2))
    assert np.all(lhs <= rhs + slack)


@pytest.mark.criterion(4, "smoothing properties over 1e5 random points")
def test_phi_midpoint_convexity(points):
    mu1, x1, mu2, x2 = points
    mid = phi(0.5 * (mu1 + mu2), 0.5 * (x1 + x2))
    avg = 0.5 * (phi(mu1, x1) + phi(mu2, x2))
    slack = 8 * np.finfo(float).eps * (np.hypot(mu1, x1) + np.hypot(mu2, x2))
    assert np.all(mid <= avg + slack)


@pytest.mark.criterion(4, "smoothing properties over 1e5 random points")
def test_phi_partials_match_central_differences(points):
    mu, x = points[0], points[1]
    r = np.hypot(mu, x)
    keep = r >= 1e-3
    mu, x, r = mu[keep], x[keep], r[keep]
    h = 1e-5 * r
    d_mu, d_x = phi_partials(mu, x)
    fd_mu = (phi(mu + h, x) - phi(mu - h, x)) / (2 * h)
    fd_x = (phi(mu, x + h) - phi(mu, x - h)) / (2 * h)
    assert keep.sum() > 0.9 * N_POINTS
    assert np.max(np.abs(d_mu - fd_mu)) <= 1e-6
    assert np.max(np.abs(d_x - fd_x)) <= 1e-6


# -- 5. Jacobian consistency -------------------------------------------------


def _random_case(i):
    rng = make_rng((5, i))
    n = int(rng.integers(2, 9))
    a = rng.standard_normal((n, n)) + 3 * np.eye(n)
    b = rng.standard_normal((n, n))
    p = GaveProblem(a, b, rng.standard_normal(n))
    z = Iterate(float(10 ** rng.uniform(-2, 0)), rng.standard_normal(n))
    return p, z, rng


@pytest.mark.criterion(5, "Jacobian consistency on 50 random cases")
@pytest.mark.parametrize("i", range(50))
def test_reduced_matrix_matches_finite_differences(i):
    p, z, _ = _random_case(i)
    jac = reduced_newton_matrix(p, z)
    fd = np.empty_like(jac)
    for j in range(p.n):
        h = 1e-6 * max(1.0, abs(z.x[j]))
        e = np.zeros(p.n)
        e[j] = h
        _, up = h_eval(p, Iterate(z.mu, z.x + e))
        _, dn = h_eval(p, Iterate(z.mu, z.x - e))
        fd[:, j] = (up - dn) / (2 * h)
    assert np.linalg.norm(jac - fd) <= 1e-5 * np.linalg.norm(jac)


@pytest.mark.criterion(5, "Jacobian consistency on 50 random cases")
@pytest.mark.parametrize("i", range(50))
def test_reduced_solve_matches_stacked_system(i):
    p, z, _ = _random_case(i)
    cfg = SolverConfig(mu0=z.mu)
    s = init_state(p, cfg, z.x)
    s = replace(s, beta=0.3 * s.mu)
    d = newton_direction(p, s)
    mu, lower = h_eval(p, z)
    rhs = -np.concatenate([[mu], lower])
    rhs[0] += s.beta
    stacked = dense_solve(full_jacobian(p, z), rhs)
    reduced = np.concatenate([[d.d_mu], d.d_x])
    assert np.linalg.norm(reduced - stacked) <= 1e-10 * max(1.0, np.linalg.norm(stacked))


# -- 6. verification fixtures ------------------------------------------------


@pytest.mark.criterion(6, "verification fixtures (W holds, sigma fails, singular member)")
def test_interval_pair_w_property_holds():
    rep = column_w_property(PAIR_A + PAIR_B, PAIR_A - PAIR_B)
    assert rep.holds and rep.sign == 1 and rep.n_representatives == 4


@pytest.mark.criterion(6, "verification fixtures (W holds, sigma fails, singular member)")
def test_interval_pair_sigma_condition_fails():
    rep = sigma_sufficient_condition(PAIR_A, PAIR_B)
    assert not rep.holds
    assert rep.sigma_min_a < rep.sigma_max_b


@pytest.mark.criterion(6, "verification fixtures (W holds, sigma fails, singular member)")
def test_interval_singular_member():
    sign, logabs = determinant_sign([[2.0, -2.0], [-2.0, 2.0]])
    assert sign == 0 and logabs == -math.inf
    lo, hi = PAIR_A - np.abs(PAIR_B), PAIR_A + np.abs(PAIR_B)
    member = np.array([[2.0, -2.0], [-2.0, 2.0]])
    assert np.all(lo <= member) and np.all(member <= hi)


# -- 7. superlinear tail -----------------------------------------------------


@pytest.mark.criterion(7, "superlinear tail on every family-1 (0, 0) run (log r3 <= 1.7 log r2)")
@pytest.mark.parametrize("m", TABLE_BLOCK_DIMS)
def test_superlinear_tail(m, table_runs):
    report = table_runs[ExampleSpec(1, m, 0.0, 0.0)].report
    assert report.status is Status.CONVERGED
    tail = [r.res for r in report.trace if r.res < 1e-2][-3:]
    print(f"n={m * m}: tail residuals {tail}")
    assert len(tail) >= 2
    r2, r3 = tail[-2], tail[-1]
    assert r2 > r3 > 0
    assert math.log(r3) <= 1.7 * math.log(r2)
