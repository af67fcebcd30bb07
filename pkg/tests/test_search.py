import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from obsfreq.errors import ArityMismatch, UnknownObjective
from obsfreq.inequalities import ChshScenario, chsh_star
from obsfreq.search import project_to_simplex, violation_search
from obsfreq.ternary import wd_star

from .oracles import wd_star_grid_minimum


@settings(max_examples=300, deadline=None)
@given(arrays(float, st.integers(1, 30), elements=st.floats(-5, 5)))
def test_simplex_projection(v):
    x = project_to_simplex(v)
    assert np.all(x >= 0)
    assert abs(x.sum() - 1) <= 1e-9
    # projection is idempotent
    assert np.allclose(project_to_simplex(x), x, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(arrays(float, 5, elements=st.floats(-2, 2)), arrays(float, 5, elements=st.floats(0, 1)))
def test_simplex_projection_is_nearest(v, y):
    # any other simplex point is at least as far away
    y = y + 1e-9
    y = y / y.sum()
    x = project_to_simplex(v)
    assert np.linalg.norm(v - x) <= np.linalg.norm(v - y) + 1e-9


def test_grid_oracle_optimum():
    assert wd_star_grid_minimum(6) == -1.0


@pytest.mark.parametrize("seed", range(3))
def test_wd_star_reaches_optimum(seed):
    d, margin = violation_search("wd_star", 3, 10_000, seed)
    assert margin <= -0.99
    assert wd_star(d, 0, 1, 2).margin == pytest.approx(margin, abs=1e-9)


def test_chsh_star_reaches_four():
    d, value = violation_search("chsh_star", 4, 100_000, 0)
    assert value >= 3.9
    assert chsh_star(ChshScenario(d)).value == pytest.approx(value, abs=1e-9)


def test_budget_one_is_deterministic():
    a, ma = violation_search("wd_star", 3, 1, 42)
    b, mb = violation_search("wd_star", 3, 1, 42)
    assert ma == mb and np.array_equal(a.weights, b.weights)
    # the single candidate is the seed's random starting point
    w = np.random.default_rng(42).exponential(size=27)
    assert np.allclose(a.weights, w / w.sum(), atol=1e-15)


@pytest.mark.parametrize("budget", [1, 10, 500])
def test_returns_valid_distribution(budget):
    for objective, n in (("wd_star", 3), ("chsh_star", 4)):
        d, _ = violation_search(objective, n, budget, 3)
        assert np.all(d.weights >= 0) and abs(d.weights.sum() - 1) <= 1e-9


def test_unknown_objective():
    with pytest.raises(UnknownObjective):
        violation_search("bell64", 3, 10, 0)


def test_arity():
    with pytest.raises(ArityMismatch):
        violation_search("chsh_star", 3, 10, 0)
