from __future__ import annotations

import math

import pytest

from lambdacount import asymptotics as asy


def test_beta_gamma():
    assert asy.beta(2) == 50
    assert asy.gamma_exp(2) == 0
    assert asy.beta(1) == 6 and asy.gamma_exp(1) == pytest.approx(-1 / 3)


def test_Bp_product():
    assert asy.compute_Bp(2) == pytest.approx(1 / (math.gamma(1.2) * math.gamma(0.8)), rel=1e-12)
    assert asy.compute_Bp(2) == pytest.approx(0.935485, rel=1e-5)
    with pytest.raises(ValueError):
        asy.compute_Bp(0)


def test_eml_base_constant_is_e_over_sqrt_2pi():
    # int_1^2 log Gamma = log sqrt(2 pi) - 1
    assert asy.eml_base_constant() == pytest.approx(math.e / math.sqrt(2 * math.pi), rel=1e-13)


def test_eml_form_gap_shrinks_like_one_over_p():
    gaps = [abs(asy.compute_Bp_eml(p) / asy.compute_Bp(p) - 1) for p in range(2, 30)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert all(g * (2 * p + 1) < 2 for p, g in zip(range(2, 30), gaps))
    assert gaps[-1] < 0.05


def test_compute_ap_reports():
    r = asy.compute_ap(3, 200)
    assert r.p == 3 and r.n_terms == 200
    assert r.value == pytest.approx(1.0046726194, rel=1e-6)
    assert 0 <= r.last_step < 1e-6
    assert r.partial <= r.value
    with pytest.raises(ValueError):
        asy.compute_ap(1)
    with pytest.raises(ValueError):
        asy.compute_ap(2, 2)


def test_constants_stirling_relations():
    c = asy.BciConstants.compute(3, 200)
    assert c.A_p == pytest.approx(c.a_p * c.B_p, rel=1e-15)
    assert c.bar_beta_p == pytest.approx(c.beta_p / math.e**3)
    assert c.bar_gamma_p == pytest.approx(-15 / 14)


def test_bci_estimate_logspace():
    # no overflow far beyond float range of (n-1)!^p
    v = asy.bci_estimate(3, 2000, A=1.0)
    assert math.isfinite(v) and v > 1000
    with pytest.raises(ValueError):
        asy.bci_estimate(1, 10)


def test_linearized_ratio_trends_to_one():
    rs = [asy.linearized_ratio(2, j) for j in (25, 50, 100, 200)]
    assert all(abs(b - 1) < abs(a - 1) for a, b in zip(rs, rs[1:]))
    assert abs(rs[-1] - 1) < 1e-2


def test_bci1_growth():
    assert math.isfinite(asy.bci1_growth(2))
    assert asy.bci1_fit(2).ratios[0] > 0
    for bad in (3, 4, 100):
        with pytest.raises(ValueError):
            asy.bci1_growth(bad)
    fit = asy.bci1_fit(302)
    assert fit.sizes[-1] == 302 and 0.5 < fit.fitted_constant < 1.5


def test_lambda_bounds_small_n():
    r = asy.lambda_bounds(3, 0.1)
    assert r.n == 3 and r.log_lambda == pytest.approx(math.log(2))
    assert r.lower_exponent < r.upper_exponent
    with pytest.raises(ValueError):
        asy.lambda_bounds(2, 0.1)
    with pytest.raises(ValueError):
        asy.lambda_bounds(10, 0)


def test_lambert_w():
    assert asy.lambert_w(0) == 0
    assert asy.lambert_w(math.e) == pytest.approx(1, rel=1e-14)
    prev = -1.0
    for i in range(1, 400):
        x = i * 0.05
        w = asy.lambert_w(x * math.exp(x))
        assert w == pytest.approx(x, rel=1e-10)
        assert w > prev
        prev = w
    with pytest.raises(ValueError):
        asy.lambert_w(-0.1)


def test_lambert_expansion_and_bracket():
    lo, mid, hi = asy.n_u_bracket(1e6)
    assert lo <= mid <= hi
    n = 1e8
    err = asy.lambert_w(math.e * n) - asy.lambert_expansion(n)
    assert abs(err) < 3 * math.log(math.log(n)) / math.log(n)
