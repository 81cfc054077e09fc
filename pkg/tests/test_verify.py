import numpy as np
import pytest

from nsgave.core import GaveProblem, residual
from nsgave.errors import DimensionMismatch, DimensionTooLarge
from nsgave.problems import make_rng, random_solvable_gave
from nsgave.verify import (
    bd_nonsingularity_sample,
    column_w_property,
    gave_w_property,
    sigma_sufficient_condition,
    sign_enumeration_oracle,
    verify_oracle_solution,
)

PAIR_A = np.array([[1001.0, -496.0], [-994.0, 501.0]])
PAIR_B = np.array([[999.0, -494.0], [-995.0, 499.0]])


def representative_dets(m, n):
    """All column representative determinants by explicit 2x2 or cofactor enumeration."""
    dim = m.shape[0]
    out = []
    for code in range(1 << dim):
        cols = [n[:, j] if code >> j & 1 else m[:, j] for j in range(dim)]
        out.append(np.linalg.det(np.column_stack(cols)))
    return out


def test_identity_pair():
    rep = column_w_property(np.eye(3), np.eye(3))
    assert rep.holds and rep.sign == 1 and rep.n_representatives == 8


def test_interval_pair_determinants():
    dets = representative_dets(PAIR_A + PAIR_B, PAIR_A - PAIR_B)
    assert np.allclose(sorted(dets), [6, 22, 2990, 30890])
    assert gave_w_property(PAIR_A, PAIR_B).holds


def test_failing_pair_reports_witness():
    rep = column_w_property(np.eye(2), np.diag([-1.0, 1.0]))
    assert not rep.holds and rep.sign is None
    assert rep.witness == (True, False)


def test_singular_representative_fails():
    rep = column_w_property(np.eye(2), np.array([[1.0, 0.0], [0.0, 0.0]]))
    assert not rep.holds


def test_size_guards():
    with pytest.raises(DimensionTooLarge):
        column_w_property(np.eye(23), np.eye(23))
    with pytest.raises(DimensionMismatch):
        column_w_property(np.eye(2), np.eye(3))
    with pytest.raises(DimensionTooLarge):
        sign_enumeration_oracle(GaveProblem(np.eye(16), np.eye(16), np.ones(16)))


def test_sweep_matches_enumeration(rng):
    m = rng.standard_normal((5, 5)) + 2 * np.eye(5)
    n = rng.standard_normal((5, 5)) + 2 * np.eye(5)
    dets = representative_dets(m, n)
    expected = all(d > 0 for d in dets) or all(d < 0 for d in dets)
    assert column_w_property(m, n).holds == expected


def test_sample_with_zero_b_equals_a_alone(rng):
    a = rng.standard_normal((4, 4)) + 3 * np.eye(4)
    rep = bd_nonsingularity_sample(a, np.zeros((4, 4)), samples=50)
    ref = bd_nonsingularity_sample(a, np.zeros((4, 4)), samples=0)
    assert rep.margin == ref.margin and not rep.singular


def test_sample_interval_pair_is_nonsingular():
    rep = bd_nonsingularity_sample(PAIR_A, PAIR_B, samples=2000, seed=1)
    assert not rep.singular and rep.margin > 0


def test_sample_finds_constructed_singular_member(rng):
    a = rng.standard_normal((4, 4))
    b = np.eye(4)
    d = np.array([0.3, -0.5, 0.1, 0.7])
    # make column 0 of A + B diag(d) a combination of columns 1 and 2
    bd = a + b * d
    a[:, 0] = bd[:, 1] + 2 * bd[:, 2] - b[:, 0] * d[0]
    rep = bd_nonsingularity_sample(a, b, samples=10, candidates=[d])
    assert rep.singular and not rep.sign_change
    assert np.array_equal(rep.witness, d)


def test_sample_large_dimension_path(rng):
    n = 60
    a = rng.standard_normal((n, n)) + 20 * np.eye(n)
    rep = bd_nonsingularity_sample(a, 0.1 * rng.standard_normal((n, n)), samples=20)
    assert not rep.singular and rep.samples == 21


def test_sigma_examples():
    assert sigma_sufficient_condition(2 * np.eye(3), np.eye(3)).holds
    rep = sigma_sufficient_condition(np.eye(3), np.eye(3))
    assert not rep.holds and rep.margin == pytest.approx(0.0, abs=1e-15)
    assert not sigma_sufficient_condition(PAIR_A, PAIR_B).holds


def test_oracle_examples():
    p = GaveProblem(2 * np.eye(2), -np.eye(2), [1.0, -1.0])
    sol = sign_enumeration_oracle(p)
    assert sol.count == 1
    assert np.allclose(sol.solutions[0], [1.0, -1.0 / 3.0])
    assert verify_oracle_solution(p, sol)

    p = GaveProblem(np.diag([2.0, 4.0]), np.zeros((2, 2)), [2.0, -8.0], allow_zero_b=True)
    sol = sign_enumeration_oracle(p)
    assert sol.count == 1 and np.allclose(sol.solutions[0], [1.0, -2.0])


def test_oracle_deduplicates_zero_components():
    # the solution x = (0, 1) is consistent with both signs of x_0
    p = GaveProblem(2 * np.eye(2), -np.eye(2), [0.0, 1.0])
    sol = sign_enumeration_oracle(p)
    assert sol.count == 1
    assert len(sol.sign_patterns[0]) == 2


def test_oracle_finds_multiple_solutions():
    # x - 2|x| = -1 has the two roots x = 1 and x = -1/3
    p = GaveProblem([[1.0]], [[-2.0]], [-1.0])
    sol = sign_enumeration_oracle(p)
    assert sol.count == 2
    assert sorted(float(x[0]) for x in sol.solutions) == pytest.approx([-1.0 / 3.0, 1.0])
    assert not gave_w_property(p.a, p.b_mat).holds


def test_oracle_unique_for_random_w_instance():
    p = random_solvable_gave(8, 11)
    assert gave_w_property(p.a, p.b_mat).holds
    sol = sign_enumeration_oracle(p)
    assert sol.count == 1
    assert residual(p, sol.solutions[0]) <= 1e-10 * np.linalg.norm(p.rhs)


def test_unique_solution_for_many_right_hand_sides():
    rng = make_rng(8)
    base = random_solvable_gave(6, 8)
    a, b = base.a, base.b_mat
    assert gave_w_property(a, b).holds
    for _ in range(50):
        sol = sign_enumeration_oracle(GaveProblem(a, b, rng.uniform(-5, 5, 6)))
        assert sol.count == 1


def test_sigma_condition_implies_w_property():
    for i in range(30):
        rng = make_rng((9, i))
        n = int(rng.integers(2, 8))
        a = rng.standard_normal((n, n)) + rng.uniform(0, 4) * np.eye(n)
        b = rng.uniform(0.1, 1.0) * rng.standard_normal((n, n))
        if sigma_sufficient_condition(a, b).holds:
            assert gave_w_property(a, b).holds


def test_sampling_consistent_with_exact_sweep():
    """Exact sweep and 10^4-sample check on 100 random 6x6 pairs.

    A sampled singular member (exact or via a determinant sign change)
    proves the W-property fails, so any disagreement in that direction is
    a bug. Sampling can miss a failure whose singular set hugs a corner of
    the box; seeding the sampler with the failing vertex must then find it.
    """
    misses = 0
    failing = 0
    for i in range(100):
        rng = make_rng((99, i))
        a = rng.standard_normal((6, 6)) + 3 * np.eye(6)
        b = rng.standard_normal((6, 6)) * rng.uniform(0.2, 1.5)
        exact = gave_w_property(a, b)
        sampled = bd_nonsingularity_sample(a, b, samples=10_000, seed=i)
        if exact.holds:
            assert not sampled.singular, f"pair {i}: sampling contradicts the exact sweep"
            continue
        failing += 1
        if not sampled.singular:
            misses += 1
            vertex = np.where(np.array(exact.witness), -1.0, 1.0)
            seeded = bd_nonsingularity_sample(a, b, samples=0, candidates=[np.ones(6), vertex])
            assert seeded.singular
    assert 0 < failing < 100
    assert misses <= failing // 10
