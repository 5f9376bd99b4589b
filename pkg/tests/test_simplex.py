import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from oracles import tableau_lp
from sarplan.solver import simplex

INF = np.inf


def _solve_ub(c, A, b, lb=None, ub=None, **kw):
    n = len(c)
    lb = np.zeros(n) if lb is None else lb
    ub = np.full(n, INF) if ub is None else ub
    return simplex.solve(c, A, np.full(len(b), -INF), np.asarray(b, float), lb, ub, **kw)


def test_small_example():
    # max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
    r = _solve_ub([3, 2], [[1, 1], [1, 3]], [4, 6], ub=np.array([3.0, INF]))
    assert r.status == "optimal"
    assert r.objective == pytest.approx(11.0)
    assert np.allclose(r.x, [3, 1])


def test_infeasible_and_unbounded():
    r = simplex.solve([1.0], np.array([[1.0]]), np.array([5.0]), np.array([INF]), np.zeros(1), np.array([2.0]))
    assert r.status == "infeasible"
    r = _solve_ub([1.0, 1.0], [[1.0, -1.0]], [1.0])
    assert r.status == "unbounded"


def test_no_rows():
    r = simplex.solve(np.array([1.0, -1.0]), np.zeros((0, 2)), np.zeros(0), np.zeros(0),
                      np.array([0.0, -2.0]), np.array([3.0, 5.0]))
    assert r.objective == pytest.approx(5.0)


@settings(max_examples=300)
@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 6), st.integers(1, 6))
def test_matches_tableau_oracle(seed, m, n):
    rng = np.random.default_rng(seed)
    A = rng.integers(-3, 6, size=(m, n)).astype(float)
    b = rng.integers(0, 10, size=m).astype(float)
    c = rng.integers(-2, 6, size=n).astype(float)
    ours = _solve_ub(c, A, b)
    status, value = tableau_lp(c, A, b)
    assert ours.status == status
    if status == "optimal":
        assert ours.objective == pytest.approx(value, abs=1e-7)
        assert np.all(A @ ours.x <= b + 1e-7)


@settings(max_examples=300)
@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 6), st.integers(1, 6))
def test_bounded_with_ranges_matches_highs(seed, m, n):
    rng = np.random.default_rng(seed)
    A = rng.integers(-3, 4, size=(m, n)).astype(float)
    lo = rng.integers(-6, 1, size=m).astype(float)
    hi = lo + rng.integers(0, 8, size=m)
    lo[rng.random(m) < 0.3] = -INF
    lb = rng.integers(-3, 1, size=n).astype(float)
    ub = lb + rng.integers(0, 5, size=n)
    c = rng.normal(size=n)
    ours = simplex.solve(c, A, lo, hi, lb, ub)
    keep = np.isfinite(lo)
    ref = linprog(-c, A_ub=np.vstack([A, -A[keep]]), b_ub=np.concatenate([hi, -lo[keep]]),
                  bounds=list(zip(lb, ub)), method="highs")
    if ref.status == 2:
        assert ours.status == "infeasible"
    else:
        assert ours.status == "optimal"
        assert ours.objective == pytest.approx(-ref.fun, abs=1e-7)


@settings(max_examples=100)
@given(st.integers(0, 2 ** 31 - 1))
def test_warm_start_after_bound_change(seed):
    rng = np.random.default_rng(seed)
    m, n = 5, 7
    A = rng.integers(0, 4, size=(m, n)).astype(float)
    hi = rng.integers(3, 12, size=m).astype(float)
    lo = np.full(m, -INF)
    c = rng.integers(1, 5, size=n).astype(float)
    lb, ub = np.zeros(n), np.full(n, 3.0)
    first = simplex.solve(c, A, lo, hi, lb, ub)
    j = int(rng.integers(n))
    ub2 = ub.copy()
    ub2[j] = np.floor(first.x[j] / 2)
    warm = simplex.solve(c, A, lo, hi, lb, ub2, basis=first.basis)
    cold = simplex.solve(c, A, lo, hi, lb, ub2)
    assert warm.status == cold.status == "optimal"
    assert warm.objective == pytest.approx(cold.objective, abs=1e-8)
