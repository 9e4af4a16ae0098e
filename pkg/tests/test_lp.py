"""Simplex solver against scipy's reference LP solver, plus the membership
and gauge helpers built on it."""
import numpy as np
import pytest
from scipy.optimize import linprog

from bmdist.lp import convex_membership, gauge_lp, solve_lp


def _random_feasible_lp(rng, m, n):
    # b = A x0 with x0 >= 0 guarantees feasibility; boundedness is not
    # guaranteed, so statuses are compared rather than assumed.
    A = rng.normal(size=(m, n))
    x0 = rng.uniform(0.0, 2.0, n)
    b = A @ x0
    c = rng.normal(size=n)
    return c, A, b


def test_matches_scipy_on_random_problems():
    rng = np.random.default_rng(42)
    optimal = 0
    for _ in range(60):
        m = int(rng.integers(2, 6))
        n = int(rng.integers(m, m + 6))
        c, A, b = _random_feasible_lp(rng, m, n)
        ours = solve_lp(c, A, b)
        ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        if ref.status == 3:
            assert ours.status == "unbounded"
        else:
            assert ref.status == 0
            assert ours.status == "optimal"
            assert ours.objective == pytest.approx(ref.fun, abs=1e-7)
            assert np.all(ours.x >= -1e-9)
            assert np.abs(A @ ours.x - b).max() < 1e-8
            optimal += 1
    assert optimal > 10


def test_detects_infeasible():
    A = [[1.0, 1.0], [1.0, 1.0]]
    b = [1.0, 2.0]
    res = solve_lp([0.0, 0.0], A, b)
    assert res.status == "infeasible"
    assert res.x is None and res.objective is None


def test_detects_unbounded():
    res = solve_lp([-1.0, 0.0], [[1.0, -1.0]], [0.0])
    assert res.status == "unbounded"


def test_negative_rhs_and_redundant_rows():
    A = [[1.0, 1.0], [-1.0, -1.0], [2.0, 2.0]]
    b = [1.0, -1.0, 2.0]
    res = solve_lp([1.0, 2.0], A, b)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(1.0, abs=1e-9)
    assert res.x[0] == pytest.approx(1.0, abs=1e-9)


def test_shape_validation():
    with pytest.raises(ValueError):
        solve_lp([1.0], [[1.0, 2.0]], [1.0])
    with pytest.raises(ValueError):
        solve_lp([1.0, 2.0], [[1.0, 2.0]], [1.0, 2.0])


def test_degenerate_problems_terminate():
    # Many duplicate columns and rhs on a vertex: Bland's rule must still
    # terminate at the optimum.
    A = np.array([[1.0, 1.0, 1.0, 1.0], [1.0, 1.0, 0.0, 0.0]])
    b = np.array([1.0, 1.0])
    res = solve_lp(np.array([1.0, 2.0, 3.0, 4.0]), A, b)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(1.0, abs=1e-9)


def test_convex_membership_square():
    square = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
    w = convex_membership(square, [0.25, -0.5])
    assert w is not None
    assert np.all(w >= -1e-9)
    assert w.sum() == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(w @ square, [0.25, -0.5], atol=1e-8)
    assert convex_membership(square, [1.5, 0.0]) is None
    assert convex_membership(square, [1.0, 1.0]) is not None


def test_gauge_lp_cross_polytope_is_l1_norm():
    V = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    rng = np.random.default_rng(7)
    for _ in range(25):
        x = rng.normal(size=2)
        assert gauge_lp(V, x) == pytest.approx(np.abs(x).sum(), abs=1e-9)
    assert gauge_lp(V, [0.0, 0.0]) == pytest.approx(0.0, abs=1e-12)


def test_gauge_lp_outside_cone_is_infinite():
    V = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert gauge_lp(V, [-1.0, -1.0]) == np.inf
    assert gauge_lp(V, [2.0, 2.0]) < np.inf
