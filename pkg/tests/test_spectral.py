"""Roots, coefficients and regime labels.

Reference values were produced by an independent sympy root solve at
30 digits (see tests/oracles.py) and frozen here.
"""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hrlab.errors import InvalidParams, WrongRegime
from hrlab.spectral import (
    Params,
    Regime,
    classify_regime,
    compute_spectral,
    critical_eta,
    critical_exponent_p,
    eval_M,
    eval_P,
    limit_mu_zero,
    mu_star,
)

from .oracles import N5_MU1, N5_STAR


@pytest.mark.parametrize("N,expected", [(5, 1.5625), (6, 9.0), (8, 64.0)])
def test_mu_star(N, expected):
    assert mu_star(N) == expected


def test_polynomials_at_simple_points():
    assert eval_P(0.0, 7, 0.0) == 0.0
    assert eval_P(2.0, 7, 0.0) == 0.0
    assert eval_P(1.0, 5, 1.0) == -9.0
    assert eval_M(2.0, 5) == 10.0
    assert eval_M(-0.5, 5) == -1.25


def test_roots_match_oracle(spec_n5):
    got = spec_n5.roots
    for g, e in zip(got, N5_MU1["roots"]):
        assert g == pytest.approx(e, abs=1e-13)
    assert spec_n5.mu_N == pytest.approx(N5_MU1["mu_N"], abs=1e-13)
    assert spec_n5.c_mu == pytest.approx(N5_MU1["c_mu"], rel=1e-12)


def test_degenerate_case(spec_n5_star):
    s = spec_n5_star
    assert s.degenerate
    assert s.alpha == -0.5
    assert s.beta_minus == pytest.approx(N5_STAR["beta_minus"], abs=1e-13)
    assert s.d_mu_star == pytest.approx(N5_STAR["d_mu_star"], rel=1e-12)
    assert 2 * s.d_mu_star - eval_M(s.beta_minus, 5) + eval_M(s.alpha, 5) == pytest.approx(0, abs=1e-12)


def test_alpha_only_at_mu_star(spec_n5):
    with pytest.raises(WrongRegime):
        spec_n5.alpha


def test_c_mu_identity(spec_n5):
    s = spec_n5
    lhs = 2 * (s.alpha_minus - s.alpha_plus) * s.c_mu + eval_M(s.alpha_plus, 5) - eval_M(s.beta_minus, 5)
    assert abs(lhs) < 1e-12


@settings(max_examples=200, deadline=None)
@given(N=st.integers(5, 30), frac=st.floats(1e-6, 1.0))
def test_roots_are_zeros_and_ordered(N, frac):
    mu = frac * mu_star(N)
    s = compute_spectral(N, mu)
    for lam in s.roots:
        assert abs(eval_P(lam, N, mu)) <= 1e-9 * (1 + mu) * max(1.0, abs(lam)) ** 4
    if s.degenerate:
        assert s.beta_minus < s.alpha_minus < 0 < s.beta_plus
        assert s.d_mu_star > 0
    else:
        assert s.beta_minus < s.alpha_minus < s.alpha_plus < 0 < s.beta_plus
        assert s.c_mu < 0
    assert s.mu_N == -s.alpha_minus
    # symmetry about -a
    assert s.alpha_minus + s.alpha_plus == pytest.approx(-(N - 4), abs=1e-9)


def test_small_mu_limit():
    s = compute_spectral(5, 1e-12)
    assert abs(s.alpha_plus) < 1e-10
    assert s.alpha_minus == pytest.approx(-1.0, abs=1e-10)
    lim = limit_mu_zero(5, 0.0, p=3.0)
    assert lim["mu_N"] == pytest.approx(1.0)


def test_critical_exponents():
    assert critical_exponent_p(5, mu_star(5), 0.0) == pytest.approx(9.0, rel=1e-12)
    assert critical_exponent_p(5, 1.0, 0.0) == pytest.approx(N5_MU1["p_crit"], rel=1e-12)
    for sigma in (0.0, 1.0, 2.5):
        N = 7
        assert critical_exponent_p(N, mu_star(N), sigma) == pytest.approx(1 + 2 * (sigma + 4) / (N - 4))
    assert critical_eta(2.0, 0.0) == 8.0
    assert critical_eta(5.0, 0.0) == pytest.approx(4 * 5 / 4)
    assert critical_eta(1e9, 0.0) == pytest.approx(4.0, abs=1e-8)


@pytest.mark.parametrize(
    "params,label",
    [
        (Params(5, 1.0, 0.0, 3.0), Regime.Nonexistence_Subcritical),
        (Params(5, 1.5625, 0.0, 9.0), Regime.Open_MuStarCritical),
        (Params(5, 1.0, 0.0, 8.0), Regime.Existence_SomeSource),
        (Params(5, 1.0, 0.0, 8.0, 4.3), Regime.SecondNonexistence),
        (Params(5, 1.0, 0.0, 8.0, 4.6), Regime.SecondExistence),
        (Params(5, 1.0, 0.0, 8.0, 5.0), Regime.EtaOutsideScope),
        (Params(4, 1.0, 0.0, 8.0), Regime.InvalidParams),
        (Params(5, 2.0, 0.0, 8.0), Regime.InvalidParams),
        (Params(5, 1.0, -5.0, 8.0), Regime.InvalidParams),
        (Params(5, 1.0, 0.0, 1.0), Regime.InvalidParams),
    ],
)
def test_classify(params, label):
    assert classify_regime(params).label is label


def test_classify_at_critical_p():
    pc = critical_exponent_p(5, 1.0, 0.0)
    assert classify_regime(Params(5, 1.0, 0.0, pc)).label is Regime.Nonexistence_Critical


def test_validate_raises():
    with pytest.raises(InvalidParams):
        Params(5, 1.0, 0.0, 0.5).validate()


@pytest.mark.parametrize("N", range(5, 13))
@pytest.mark.parametrize("sigma", [0.0, 1.0])
@pytest.mark.parametrize("p", [3.0, 8.0])
def test_exponent_identity(N, sigma, p):
    s = compute_spectral(N, 0.5 * mu_star(N))
    pc = p / (p - 1)
    lhs = N + s.alpha_plus - 4 * pc - sigma / (p - 1)
    rhs = s.mu_N - (sigma + 4) / (p - 1)
    assert math.isclose(lhs, rhs, abs_tol=1e-12)
