import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hardy_sharp.errors import HypothesisViolation
from hardy_sharp.params import (
    AxisParams,
    Exponents,
    Mode,
    derive_alpha,
    derive_q,
    make_params,
    parse_axes,
    parse_number,
    validate,
)


def test_thm1_examples_valid():
    for n, beta in [(1, 0.5), (2, 1.0)]:
        params = validate([AxisParams(n, beta)], Exponents(4 / 3, 4), Mode.THM1)
        assert params.m == 1 and params.mode is Mode.THM1


def test_gamma_boundary_rejected():
    with pytest.raises(HypothesisViolation) as info:
        validate([AxisParams(1, 0, 0.9, derive_alpha(1, 0, 0.9, 1.5, 2))], Exponents(1.5, 2), Mode.THM2)
    assert info.value.relation == "gamma < n(p-1)"
    assert info.value.axis == 0
    assert info.value.residual == pytest.approx(0.4)


def test_violation_reports_axis_index():
    axes = [AxisParams(1, 0.5), AxisParams(2, 0.5)]
    with pytest.raises(HypothesisViolation) as info:
        validate(axes, Exponents(4 / 3, 4), Mode.THM1)
    assert info.value.axis == 1


@pytest.mark.parametrize("args, expected", [
    ((1, 0, 0, 2, 2), 0.0),
    ((1, 0.5, 0, 4 / 3, 4), 0.0),
    ((2, 0, 1, 2, 3), 2.5),
])
def test_derive_alpha_examples(args, expected):
    assert derive_alpha(*args) == pytest.approx(expected, abs=1e-14)


def test_derive_alpha_rejects_non_finite():
    with pytest.raises(ValueError):
        derive_alpha(1, 0, 0, 2, math.inf)


def test_exponents():
    e = Exponents(4 / 3, 4)
    assert 1 / e.p + 1 / e.p_prime == pytest.approx(1, rel=1e-14)
    assert 1 / e.q + 1 / e.q_prime == pytest.approx(1, rel=1e-14)
    for p, q in [(1.0, 2.0), (0.5, 2.0), (3.0, 2.0), (2.0, math.inf)]:
        with pytest.raises(HypothesisViolation):
            Exponents(p, q)


@pytest.mark.parametrize("kwargs", [dict(n=0), dict(n=1.5), dict(n=2, beta=-0.1), dict(n=2, beta=2.0),
                                    dict(n=1, gamma=math.nan)])
def test_axis_params_invariants(kwargs):
    with pytest.raises(HypothesisViolation):
        AxisParams(**kwargs)


def test_mode_specific_rules():
    with pytest.raises(HypothesisViolation):
        validate([AxisParams(1, 0.5, 0.1)], Exponents(4 / 3, 4), Mode.THM1)
    with pytest.raises(HypothesisViolation):
        validate([AxisParams(1, 0, 0, 0)], Exponents(2, 2), Mode.THM2)
    with pytest.raises(HypothesisViolation):
        validate([AxisParams(1, 0, 0.2, 0.3)], Exponents(2, 2), Mode.LIMIT)
    with pytest.raises(HypothesisViolation):
        validate([AxisParams(1, 0, 0, 0)], Exponents(2, 3), Mode.LIMIT)
    with pytest.raises(HypothesisViolation):
        make_params([(1, 0, 0), (1, 0, 0)], 2, 3, Mode.LEMMA2)
    with pytest.raises(HypothesisViolation):
        validate([AxisParams(1, 0.1, 0, derive_alpha(1, 0.1, 0, 2, 3))], Exponents(2, 3), Mode.LEMMA2)
    assert validate([AxisParams(1, 0, 0.2, 0.2)], Exponents(2, 2), Mode.LIMIT).mode is Mode.LIMIT


def test_make_params_derivations():
    p1 = make_params([(1, 0.5, 0), (2, 1, 0)], 4 / 3, mode="thm1")
    assert p1.q == pytest.approx(4)
    p2 = make_params([(1, 0.1, 0.2), (2, 0.3, 0.5)], 2, 4)
    assert [a.alpha for a in p2.axes] == pytest.approx([1.0, 1.8])
    p3 = make_params([(1, 0, 0.2)], 2, mode="limit")
    assert p3.q == 2 and p3.axes[0].alpha == 0.2
    p4 = make_params([(2, 0, 1, 2.5)], 2)
    assert p4.q == pytest.approx(3)
    with pytest.raises(HypothesisViolation):
        make_params([(1, 0, 0)], 2)
    with pytest.raises(HypothesisViolation):
        make_params([(1, 0, 0, 5.0)], 2, 3)


def test_describe_is_stable():
    params = make_params([(1, 0.5, 0)], 4 / 3, mode="thm1")
    assert params.describe() == "mode=thm1;p=1.3333333333333333;q=4.0;axes=1:0.5:0.0:0.0"


@given(st.lists(st.tuples(st.integers(1, 6), st.floats(0.05, 0.95)), min_size=1, max_size=4),
       st.floats(1.05, 5.0))
def test_thm1_beta_over_n_is_common(raw, p):
    ratio = raw[0][1] / p  # beta/n in (0, 1/p)
    axes = [(n, ratio * n, 0.0) for n, _ in raw]
    params = make_params(axes, p, mode="thm1")
    ratios = [a.beta / a.n for a in params.axes]
    assert max(ratios) - min(ratios) <= 1e-12


@given(st.integers(1, 5), st.floats(1.05, 6.0), st.floats(0.0, 3.0), st.floats(-3.0, 0.999), st.floats(0, 0.99))
def test_derive_alpha_then_validate(n, p, dq, gamma_frac, beta_frac):
    q = p + 0.05 + dq
    gamma = gamma_frac * n * (p - 1)
    beta = beta_frac * n
    assume(gamma < n * (p - 1))
    alpha = derive_alpha(n, beta, gamma, p, q)
    params = validate([AxisParams(n, beta, gamma, alpha)], Exponents(p, q), Mode.THM2)
    assert params.axes[0].alpha == alpha


@given(st.integers(-3, 6), st.floats(-2, 8, allow_nan=False), st.floats(-2, 8), st.floats(-5, 5),
       st.sampled_from(list(Mode)))
def test_validate_is_total(n, p, q, gamma, mode):
    try:
        axis = AxisParams(n, 0.0, gamma, gamma)
        result = validate([axis], Exponents(p, q), mode)
    except HypothesisViolation:
        return
    assert result.mode is mode


def test_parse_number_and_axes():
    assert parse_number("4/3") == pytest.approx(4 / 3, rel=1e-16)
    assert parse_number("-1/2") == -0.5
    assert parse_number(" 1.5 ") == 1.5
    with pytest.raises(ValueError):
        parse_number("abc")
    assert parse_axes("1:0.5:0,2:1:0") == [(1, 0.5, 0.0), (2, 1.0, 0.0)]
    assert parse_axes("2:0:1:5/2") == [(2, 0.0, 1.0, 2.5)]
    for bad in ["", "1:2", "1.5:0:0", "1:0:0:0:0"]:
        with pytest.raises(ValueError):
            parse_axes(bad)


def test_derive_q_inverts_derive_alpha():
    alpha = derive_alpha(2, 0.3, 0.5, 2, 4)
    assert derive_q(2, 0.3, 0.5, alpha, 2) == pytest.approx(4)
