import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardy_sharp import profiles as P
from hardy_sharp import special
from hardy_sharp.errors import GridMismatch, NonConvergence
from hardy_sharp.quadrature import (
    QuadratureSpec,
    TensorGridFunction,
    cumulative,
    integrate_sampled,
    integrate_zero_to_inf,
    log_grid,
    tensor_prefix_2d,
)

S = np.exp(np.linspace(math.log(1e-6), math.log(1e6), 121))


def test_integrate_examples():
    v, err = integrate_zero_to_inf(lambda r: np.exp(-r))
    assert v == pytest.approx(1.0, rel=1e-10) and err >= 0
    v, _ = integrate_zero_to_inf(lambda r: r ** -0.5 * (1 + r) ** -2)
    assert v == pytest.approx(math.pi / 2, rel=1e-10)


@pytest.mark.parametrize("f", [lambda r: np.ones_like(r), lambda r: 1 / r, lambda r: r ** -1.2])
def test_integrate_rejects_divergent(f):
    with pytest.raises(NonConvergence):
        integrate_zero_to_inf(f)


def test_integrate_rejects_negative():
    with pytest.raises(ValueError):
        integrate_zero_to_inf(lambda r: -np.exp(-r))


def test_integrate_with_breakpoint():
    v, _ = integrate_zero_to_inf(lambda r: np.where(r < 2.0, 1.0, 0.0), breakpoints=[2.0])
    assert v == pytest.approx(2.0, rel=1e-12)


def test_beta_identity_on_random_pairs():
    rng = np.random.default_rng(20)
    for z, w in rng.uniform(0.2, 5.0, size=(20, 2)):
        v, _ = integrate_zero_to_inf(lambda r: r ** (z - 1) * (1 + r) ** (-z - w))
        assert v == pytest.approx(special.beta(z, w), rel=1e-9)


@pytest.mark.parametrize("n, q, beta", [(1, 4.0, 0.5), (2, 4.0, 1.0), (3, 6.0, 0.4), (1, 2.5, 0.2)])
def test_cumulative_of_thm1_extremizer(n, q, beta):
    c = q * beta
    F = cumulative(P.thm1_extremizer_axis(n, q, beta), n)
    exact = S ** n / (n * (1 + S ** c) ** (n / c))
    assert np.allclose(F(S), exact, rtol=1e-9, atol=0)


def test_cumulative_indicator_and_polynomial():
    F = cumulative(P.indicator(1.0), 1)
    assert np.allclose(F(S), np.minimum(S, 1.0), rtol=1e-12, atol=0)
    G = cumulative(P.power(1.0), 2)
    assert np.allclose(G(S), S ** 3 / 3, rtol=1e-9, atol=0)


def test_cumulative_outside_grid():
    F = cumulative(P.thm1_extremizer_axis(1, 4.0, 0.5), 1)
    s = np.array([1e-12, 1e-8, 1e8, 1e12])
    assert np.allclose(F(s), s / (1 + s ** 2) ** 0.5, rtol=1e-9)


def test_cumulative_rejects_non_integrable_origin():
    with pytest.raises(NonConvergence):
        cumulative(P.power(-1.5), 1)


def test_cumulative_is_monotone():
    for prof, n in [(P.thm2_extremizer_axis(2, 2.0, 4.0, 0.5), 2), (P.lognormal_bump(0.3, 0.4), 1),
                    (P.indicator(3.0), 3)]:
        F = cumulative(prof, n)
        assert np.all(np.diff(F(S)) >= 0)
        assert np.all(np.diff(F.log_prefix) >= 0)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(0.1, 5.0), st.integers(1, 3))
def test_cumulative_linearity(a, b, n):
    f = P.power_bump(0.5, 2.0, 3.0)
    g = P.lognormal_bump(-0.5, 0.7)
    mix = cumulative(P.mixture([f, g], [a, b]), n)
    sep = a * cumulative(f, n)(S) + b * cumulative(g, n)(S)
    assert np.allclose(mix(S), sep, rtol=1e-10, atol=0)


def _grid(nodes, f1, f2, n1, n2):
    return TensorGridFunction.from_callable(lambda r1, r2: f1(r1) * f2(r2), nodes, nodes, n1, n2)


def test_tensor_prefix_zero():
    nodes = log_grid(1e-2, 1e2, 17)
    grid = TensorGridFunction(nodes, nodes, np.zeros((17, 17)), 1, 1)
    assert np.all(tensor_prefix_2d(grid).values == 0)


def test_tensor_prefix_separable_matches_cumulatives():
    nodes = log_grid(1e-3, 1e3, 49)
    f1 = P.thm1_extremizer_axis(2, 4.0, 1.0)
    f2 = P.power_bump(-0.3, 1.5, 3.0)
    G = tensor_prefix_2d(_grid(nodes, f1, f2, 2, 1)).values
    ref = cumulative(f1, 2)(nodes)[:, None] * cumulative(f2, 1)(nodes)[None, :]
    assert np.allclose(G, ref, rtol=1e-8, atol=0)


def test_tensor_prefix_indicator_square():
    nodes = np.exp(np.linspace(-3, 3, 31))
    nodes[15] = 1.0
    ind = P.indicator(1.0)
    G = tensor_prefix_2d(_grid(nodes, ind, ind, 1, 1)).values
    ref = np.minimum(nodes, 1)[:, None] * np.minimum(nodes, 1)[None, :]
    assert np.allclose(G, ref, rtol=1e-12)


def test_tensor_prefix_sampled_fallback_close_and_monotone():
    nodes = log_grid(1e-3, 1e3, 121)
    f1 = P.lognormal_bump(0.0, 0.8)
    f2 = P.power_bump(0.2, 2.0, 2.5)
    exact = _grid(nodes, f1, f2, 1, 2)
    sampled = TensorGridFunction(nodes, nodes, exact.values, 1, 2)
    G = tensor_prefix_2d(sampled).values
    ref = tensor_prefix_2d(exact).values
    inner = slice(30, None)
    assert np.allclose(G[inner, inner], ref[inner, inner], rtol=1e-3)
    assert np.all(np.diff(G, axis=0) >= 0) and np.all(np.diff(G, axis=1) >= 0)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_tensor_prefix_monotone_on_random_nonseparable(seed):
    rng = np.random.default_rng(seed)
    a, b, c = rng.uniform(0.2, 2.0, size=3)
    nodes = log_grid(1e-2, 1e2, 25)
    grid = TensorGridFunction.from_callable(
        lambda r1, r2: np.exp(-(a * r1 ** 2 + b * r2 + c * r1 * r2)), nodes, nodes, 2, 1)
    G = tensor_prefix_2d(grid).values
    assert np.all(np.diff(G, axis=0) >= 0) and np.all(np.diff(G, axis=1) >= 0)


def test_tensor_grid_validation():
    nodes = log_grid(1e-2, 1e2, 5)
    with pytest.raises(GridMismatch):
        TensorGridFunction(nodes, nodes, np.zeros((5, 4)), 1, 1)
    with pytest.raises(GridMismatch):
        TensorGridFunction(nodes[::-1], nodes, np.zeros((5, 5)), 1, 1)
    with pytest.raises(ValueError):
        TensorGridFunction(nodes, nodes, -np.ones((5, 5)), 1, 1)
    with pytest.raises(ValueError):
        TensorGridFunction(nodes, nodes, np.full((5, 5), np.nan), 1, 1)


def test_csv_round_trips(tmp_path):
    nodes = log_grid(1e-6, 1e6, 64)
    prof = P.thm1_extremizer_axis(1, 4.0, 0.5)
    path = tmp_path / "profile.csv"
    prof.to_csv(path, nodes)
    back = P.read_profile_csv(path, decay_exponent=prof.decay_exponent)
    assert np.array_equal(back(nodes), prof(nodes))
    grid = _grid(log_grid(1e-2, 1e2, 9), prof, prof, 1, 1)
    gpath = tmp_path / "grid.csv"
    grid.to_csv(gpath)
    assert gpath.read_text().splitlines()[0] == "r1,r2,value"
    back_grid = TensorGridFunction.read_csv(gpath, 1, 1)
    assert np.array_equal(back_grid.values, grid.values)


def test_integrate_sampled_gaussian_in_log_variable():
    t = np.linspace(-8, 8, 161)
    y = np.exp(-t ** 2)
    assert integrate_sampled(t, y) == pytest.approx(math.sqrt(math.pi), rel=1e-8)


def test_quadrature_spec_bounds():
    for kwargs in [dict(rel_tol=0), dict(rel_tol=1e-3), dict(max_level=2), dict(max_level=15),
                   dict(grid_points=63), dict(r_min=2.0, r_max=1.0)]:
        with pytest.raises(ValueError):
            QuadratureSpec(**kwargs)
    assert QuadratureSpec().grid().size == 512


def test_tighter_tolerance_agrees():
    f = P.thm2_extremizer_axis(1, 2.0, 4.0, 0.3)
    loose = cumulative(f, 1, QuadratureSpec(rel_tol=1e-8, grid_points=128))(S)
    tight = cumulative(f, 1, QuadratureSpec(rel_tol=1e-12, grid_points=1024))(S)
    assert np.allclose(loose, tight, rtol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cumulative_far_from_grid(n):
    cum = cumulative(P.indicator(), n)
    t = np.array([-1e19, -1e6, -2e3, 2e3, 1e6, 1e19])
    exact = np.where(t < 0, n * t, 0.0) - math.log(n)
    assert np.allclose(cum.log_F(t), exact, rtol=1e-12, atol=1e-12)
