import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import vertex_enumeration
from fsfdesign.errors import Infeasible, NoConvergence, Unbounded
from fsfdesign.lp import LpProblem, solve_lp


def test_balance_example():
    # variables (x, d): 1 - x <= d, x <= d
    p = LpProblem([0, 1], [[-1, -1], [1, -1]], [-1, 0], [(0, 1), (0, np.inf)])
    sol = solve_lp(p)
    np.testing.assert_allclose(sol.x, [0.5, 0.5], atol=1e-12)
    assert sol.objective == pytest.approx(0.5, abs=1e-12)


def test_exactly_satisfiable_example():
    p = LpProblem([0, 1], [[-0.5, -1], [0.5, -1]], [-0.5, 0.5], [(0, 1), (0, np.inf)])
    sol = solve_lp(p)
    np.testing.assert_allclose(sol.x, [1.0, 0.0], atol=1e-12)


def test_infeasible():
    p = LpProblem([1.0], [[1.0], [-1.0]], [0.0, -1.0])  # x <= 0 and x >= 1
    with pytest.raises(Infeasible):
        solve_lp(p)


def test_unbounded():
    p = LpProblem([-1.0], [[-1.0]], [0.0])  # maximise x with only x >= 0
    with pytest.raises(Unbounded):
        solve_lp(p)


def test_problem_validation():
    with pytest.raises(ValueError):
        LpProblem([], [], [])
    with pytest.raises(ValueError):
        LpProblem([1.0], [[1.0]], [1.0, 2.0])
    with pytest.raises(ValueError):
        LpProblem([1.0], [[np.nan]], [1.0])
    with pytest.raises(ValueError):
        LpProblem([1.0, 1.0], [[1.0, 1.0]], [1.0], bounds=[(0, 1)])


def random_lp(seed, p=3, m=40):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(m, p))
    # feasible by construction: a random interior point satisfies every row
    x0 = rng.uniform(-1, 1, p)
    b = a @ x0 + rng.uniform(0.05, 1.0, m)
    c = rng.normal(size=p)
    bounds = [(-5.0, 5.0)] * p
    return c, a, b, bounds


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_matches_vertex_enumeration(seed):
    c, a, b, bounds = random_lp(seed)
    sol = solve_lp(LpProblem(c, a, b, bounds))
    _, best = vertex_enumeration(c, a, b, bounds)
    assert sol.objective == pytest.approx(best, abs=1e-9 * (1 + abs(best)))
    assert np.all(a @ sol.x <= b + 1e-9)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_minimax_form_matches_oracle(seed):
    # the optimizer's own LP shape: min d s.t. |a0 + K T| <= d, T in [0,1]
    rng = np.random.default_rng(seed)
    m, rows = 2, 15
    K, a0 = rng.normal(size=(rows, m)), rng.normal(size=rows)
    ones = np.ones((rows, 1))
    A = np.vstack([np.hstack([K, -ones]), np.hstack([-K, -ones])])
    b = np.concatenate([-a0, a0])
    c = np.array([0.0, 0.0, 1.0])
    bounds = [(0, 1), (0, 1), (0, np.inf)]
    sol = solve_lp(LpProblem(c, A, b, bounds))
    _, best = vertex_enumeration(c, A, b, bounds)
    assert sol.objective == pytest.approx(best, abs=1e-11 * (1 + abs(best)))


def test_deterministic():
    c, a, b, bounds = random_lp(7)
    s1 = solve_lp(LpProblem(c, a, b, bounds))
    s2 = solve_lp(LpProblem(c, a, b, bounds))
    assert np.array_equal(s1.x, s2.x) and s1.active == s2.active


def test_stacked_adds_bound_rows():
    p = LpProblem([1.0, 1.0], [[1.0, 1.0]], [1.0], [(0, 1), (-np.inf, np.inf)])
    G, h = p.stacked()
    assert G.shape == (3, 2)
    assert h.tolist() == [1.0, 0.0, 1.0]


def test_pivot_limit_is_no_convergence():
    prob = LpProblem([1.0, 1.0], [[-1.0, -2.0], [-2.0, -1.0]], [-3.0, -3.0])
    with pytest.raises(NoConvergence):
        solve_lp(prob, max_iter=0)


def test_noise_rows_are_ignored():
    prob = LpProblem([0.0, 1.0], [[1e-17, -1.0], [-1e-17, -1.0], [1.0, -1.0], [-1.0, -1.0]],
                     [1e-16, -1e-16, 0.5, -0.5])
    sol = solve_lp(prob)
    np.testing.assert_allclose(sol.x, [0.5, 0.0], atol=1e-12)
