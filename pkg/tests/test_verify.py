import hashlib
import json
import math
import time

import numpy as np
import pytest

from hardy_sharp import constants, profiles
from hardy_sharp.errors import HypothesisViolation, ZeroNorm
from hardy_sharp.operator import SeparableRadialFunction
from hardy_sharp.params import AxisParams, make_params
from hardy_sharp.quadrature import cumulative
from hardy_sharp.verify import (
    FAMILIES,
    REPORT_COLUMNS,
    PerturbedRadial,
    SubstitutionMap,
    extremizer_thm1,
    extremizer_thm2,
    random_test_function,
    ratio,
    reduction_check,
    run_batch,
    substitution_check,
    sweep_q_to_p,
    to_csv,
    to_json,
)

THM1 = make_params([(1, 0.5, 0.0), (2, 1.0, 0.0)], 4 / 3, mode="thm1")
THM2 = make_params([(1, 0.1, 0.2), (2, 0.3, 0.5)], 2.0, 4.0)
R = np.exp(np.linspace(-8, 8, 49))


def test_extremizer_thm1_profile():
    f = extremizer_thm1(THM1)
    for prof, ax in zip(f.axis_profiles, THM1.axes):
        c = THM1.q * ax.beta
        assert prof(np.array([1e-300]))[0] == pytest.approx(1.0)
        assert prof.decay_exponent == pytest.approx(c + ax.n)
        F = cumulative(prof, ax.n)(R)
        assert np.allclose(F, R ** ax.n / (ax.n * (1 + R ** c) ** (ax.n / c)), rtol=1e-10)


def test_extremizer_thm1_needs_mode():
    with pytest.raises(HypothesisViolation):
        extremizer_thm1(THM2)


def test_extremizer_thm2_gamma_zero_profile():
    params = make_params([(2, 0.0, 0.0)], 2.0, 3.0)
    prof = extremizer_thm2(params).axis_profiles[0]
    p, q, n = 2.0, 3.0, 2
    assert np.allclose(prof(R), (1 + R ** (n * (q - p) / p)) ** (-q / (q - p)), rtol=1e-13)


def test_extremizer_thm2_attains_constant():
    rep = ratio(extremizer_thm2(THM2), THM2, function_id="extremal")
    assert abs(rep.rel_gap) <= 1e-5
    assert rep.quad_err_est >= 0


@pytest.mark.parametrize("d_scale", [0.5, 2.0])
def test_extremizer_thm2_d_independence(d_scale):
    base = ratio(extremizer_thm2(THM2), THM2).ratio
    other = ratio(extremizer_thm2(THM2, d_scale=d_scale), THM2).ratio
    assert other == pytest.approx(base, rel=1e-7)


def test_extremizer_thm1_ratio():
    rep = ratio(extremizer_thm1(THM1), THM1, function_id="extremal")
    assert abs(rep.rel_gap) <= 1e-6
    assert rep.constant == pytest.approx(4 / math.pi)


@pytest.mark.parametrize("params", [THM1, THM2], ids=["thm1", "thm2"])
def test_indicator_is_not_extremal(params):
    ind = SeparableRadialFunction(tuple(profiles.indicator() for _ in params.axes))
    rep = ratio(ind, params, function_id="indicator")
    assert rep.gap > 0 and rep.ratio > 0


def test_zero_function_raises():
    with pytest.raises(ZeroNorm):
        ratio(SeparableRadialFunction((profiles.zero(), profiles.indicator())), THM2)


def _fingerprint(f):
    vals = f(R[:, None], R[None, :])
    return hashlib.sha256(np.ascontiguousarray(vals).tobytes()).hexdigest()


@pytest.mark.parametrize("family", FAMILIES)
def test_random_functions_are_reproducible(family):
    a = _fingerprint(random_test_function(7, THM2, family))
    b = _fingerprint(random_test_function(7, THM2, family))
    c = _fingerprint(random_test_function(8, THM2, family))
    assert a == b and a != c


def test_random_function_unknown_family():
    with pytest.raises(ValueError):
        random_test_function(0, THM2, "gaussian")


@pytest.mark.parametrize("params", [THM1, THM2], ids=["thm1", "thm2"])
def test_random_functions_respect_bound(params):
    for seed in range(12):
        rep = ratio(random_test_function(seed, params, FAMILIES[seed % 3]), params, seed=seed)
        assert 0 < rep.ratio <= rep.constant * (1 + 1e-8 + rep.quad_err_est)


@pytest.mark.parametrize("c", [0.5, 2.0, 10.0])
def test_scale_and_dilation_invariance(c):
    f = random_test_function(3, THM2, "mixture")
    base = ratio(f, THM2).ratio
    assert ratio(f.scaled(c), THM2).ratio == pytest.approx(base, rel=1e-7)
    assert ratio(f.dilated(c), THM2).ratio == pytest.approx(base, rel=1e-7)


def test_substitution_identity_at_gamma_zero():
    smap = SubstitutionMap(AxisParams(2, 0.0, 0.0), 2.0)
    assert np.allclose(smap.s_of_rho(R), R, rtol=1e-14)
    prof = profiles.lognormal_bump(0.3, 0.7)
    assert np.allclose(smap.g_of_f(prof)(R), prof(R), rtol=1e-14)
    rep = substitution_check(prof, AxisParams(2, 0.0, 0.0), 2.0)
    assert rep.rel_diff <= 1e-14


@pytest.mark.parametrize("n, p, q, gamma", [(1, 2.0, 4.0, 0.3), (2, 1.5, 3.0, 0.2), (3, 3.0, 5.0, -1.0)])
def test_substitution_on_extremizer(n, p, q, gamma):
    rep = substitution_check(profiles.thm2_extremizer_axis(n, p, q, gamma), AxisParams(n, 0.0, gamma), p)
    assert rep.rel_diff <= 1e-9
    assert rep.inverse_err <= 1e-10


def test_substitution_map_rejects_bad_gamma():
    with pytest.raises(HypothesisViolation):
        SubstitutionMap(AxisParams(1, 0.0, 1.0), 2.0)


def test_sweep_examples():
    base = make_params([(1, 0.0, 0.0)], 2.0, mode="limit")
    rows = sweep_q_to_p(base, [1e-1, 1e-2, 1e-3, 1e-6])
    assert rows[-1].constant == pytest.approx(2.0, abs=1e-4)
    assert all(a.gap > b.gap for a, b in zip(rows, rows[1:]))
    sym = sweep_q_to_p(make_params([(2, 0.0, 0.4)] * 2, 3.0, mode="limit"), [1e-2])
    assert sym[0].limit == pytest.approx((3 / (2 - 0.2)) ** 2, rel=1e-14)


def test_sweep_rejects_beta():
    with pytest.raises(HypothesisViolation):
        sweep_q_to_p(THM2, [1e-2])


def test_perturbed_radial_reduces_to_radial_part():
    f = PerturbedRadial.random(0, 2, 3, radial=True)
    x1 = np.random.default_rng(1).standard_normal((20, 2))
    x2 = np.random.default_rng(2).standard_normal((20, 3))
    ref = f.radial_part(np.linalg.norm(x1, axis=1), np.linalg.norm(x2, axis=1))
    assert np.allclose(f(x1, x2), ref)


def test_reduction_radial_and_odd():
    params = make_params([(1, 0.25, 0.0), (2, 0.5, 0.0)], 2.0, 4.0)
    for radial in (True, False):
        rep = reduction_check(params, seed=2, samples=40_000, radial=radial)
        assert rep.deterministic.shape == (4, 4)
        assert rep.identity_ok and rep.contraction_ok and rep.passed


def test_reduction_needs_two_small_axes():
    with pytest.raises(HypothesisViolation):
        reduction_check(make_params([(2, 0.5, 0.0)], 2.0, 4.0))
    with pytest.raises(HypothesisViolation):
        reduction_check(make_params([(4, 0.5, 0.0), (1, 0.0, 0.0)], 2.0, 4.0))


def test_report_serialization_round_trip():
    reps = [ratio(random_test_function(s, THM2), THM2, function_id="random", seed=s) for s in range(3)]
    records = [r.as_record() for r in reps]
    assert tuple(records[0]) == REPORT_COLUMNS
    assert json.loads(to_json(records)) == records
    rows = to_csv(records).splitlines()
    assert rows[0] == ",".join(REPORT_COLUMNS)
    assert float(rows[1].split(",")[-4]) == reps[0].rel_gap


def test_json_writes_nulls():
    out = json.loads(to_json([{"a": None, "b": math.nan, "c": math.inf, "d": 1, "e": "x"}]))
    assert out == [{"a": None, "b": None, "c": None, "d": 1, "e": "x"}]


def test_run_batch_preserves_order(monkeypatch):
    def job(i):
        def run():
            time.sleep(0.01 * (5 - i))
            return i
        return run

    assert run_batch([job(i) for i in range(6)], threads=4) == list(range(6))
    monkeypatch.setenv("HARDY_SHARP_THREADS", "1")
    assert run_batch([job(i) for i in range(3)]) == [0, 1, 2]


def test_report_constant_follows_mode():
    rep = ratio(random_test_function(0, THM1), THM1)
    assert rep.constant == constants.thm1_constant(THM1).value
