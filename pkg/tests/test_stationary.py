import numpy as np
import pytest

from hrlab.errors import CertificateFailed, InvalidParams, NoAdmissibleQ, QOutOfRange, SupFailure
from hrlab.spectral import Params, compute_spectral, critical_eta, critical_exponent_p, eval_P
from hrlab.stationary import (
    Direction,
    StationaryRegime,
    admissible_q_interval,
    build_pair,
    build_Vq,
    epsilon0,
    sup_g,
    verify_source_class,
)

P8 = Params(5, 1.0, 0.0, 8.0)
P10_STAR = Params(5, 1.5625, 0.0, 10.0)

from .oracles import EPS0_P8, EPS0_STAR


def test_q_interval_examples(spec_n5, spec_n5_star):
    lo, hi = admissible_q_interval(spec_n5, P8)
    assert lo == pytest.approx(4 / 7)
    assert hi == pytest.approx(0.79617957362320, abs=1e-13)
    lo, hi = admissible_q_interval(spec_n5_star, P10_STAR)
    assert (lo, hi) == (pytest.approx(4 / 9), pytest.approx(0.5))


def test_no_q_at_critical_p(spec_n5):
    pc = critical_exponent_p(5, 1.0, 0.0)
    with pytest.raises(NoAdmissibleQ):
        admissible_q_interval(spec_n5, Params(5, 1.0, 0.0, pc))


def test_eta_too_large(spec_n5):
    with pytest.raises(NoAdmissibleQ):
        admissible_q_interval(spec_n5, P8, eta=5.0)


@pytest.mark.parametrize("which", ["sub", "crit"])
def test_Vq_boundary_and_operator(which, spec_n5, spec_n5_star):
    spec, params = (spec_n5, P8) if which == "sub" else (spec_n5_star, P10_STAR)
    lo, hi = admissible_q_interval(spec, params)
    q = 0.5 * (lo + hi)
    V = build_Vq(spec, q, (lo, hi))
    assert abs(V.at_one()) < 1e-12
    assert abs(V.laplacian(5).at_one()) < 1e-12
    LV = V.hardy_rellich(5, spec.mu).collect(1e-12)
    main = [t for t in LV if abs(t.lam - (-q - 4)) < 1e-9 and t.logpow == 0]
    # the sign of V_q is chosen so that the source is positive
    assert main and main[0].coeff == pytest.approx(abs(eval_P(-q, 5, spec.mu)), rel=1e-10)
    rest = [t for t in LV if t not in main]
    assert all(abs(t.coeff) < 1e-10 for t in rest)


def test_q_out_of_range(spec_n5):
    with pytest.raises(QOutOfRange):
        build_Vq(spec_n5, 0.9, admissible_q_interval(spec_n5, P8))


def test_sup_needs_decay(spec_n5):
    V = build_Vq(spec_n5, 0.3)
    with pytest.raises(SupFailure):
        sup_g(spec_n5, P8, V, 0.3)


def test_eps0_frozen_and_grid_stable(spec_n5, spec_n5_star):
    for spec, params, ref in ((spec_n5, P8, EPS0_P8), (spec_n5_star, P10_STAR, EPS0_STAR)):
        q = 0.5 * sum(admissible_q_interval(spec, params))
        V = build_Vq(spec, q)
        e1 = epsilon0(spec, params, V, q, n_grid=10_000)
        e2 = epsilon0(spec, params, V, q, n_grid=20_000)
        assert e1 == pytest.approx(ref, rel=1e-10)
        assert abs(e2 - e1) / e1 < 1e-3


def test_pair_positivity_and_residual(spec_n5):
    pair = build_pair(spec_n5, P8)
    assert pair.regime is StationaryRegime.Subcritical
    r = np.geomspace(1.0, 1e8, 10_000)
    assert np.all(pair.f_eps(r[1:]) > 0)
    rr = np.geomspace(1.01, 50, 200)
    direct = pair.f_eps.direct(rr, 5, 1.0)
    assert np.allclose(pair.f_eps(rr), direct, rtol=1e-10, atol=1e-14)


def test_pair_small_eps_limit(spec_n5):
    pair = build_pair(spec_n5, P8, eps=1e-8)
    r = np.array([2.0, 10.0, 100.0])
    lim = abs(pair.P_minus_q) * r ** (-pair.q - 4)
    assert np.allclose(pair.f_eps(r) / 1e-8, lim, rtol=1e-6)


def test_eps_above_eps0_rejected(spec_n5):
    with pytest.raises(InvalidParams):
        build_pair(spec_n5, P8, eps=10.0)


def test_critical_pair(spec_n5_star):
    pair = build_pair(spec_n5_star, P10_STAR)
    assert pair.regime is StationaryRegime.CriticalMu
    assert pair.P_minus_q < 0
    assert pair.certificate["worst_positivity_margin"] > 0


@pytest.mark.parametrize("eta_sel", ["crit", "mid"])
def test_decay_certificate(spec_n5, eta_sel):
    ec = critical_eta(8.0, 0.0)
    eta = ec if eta_sel == "crit" else 4.6
    pair = build_pair(spec_n5, P8, eta=eta)
    assert pair.certificate["worst_decay_ratio"] <= 1 + 1e-12
    assert verify_source_class(pair.f_eps, eta, Direction.Upper)


def test_source_class_examples():
    f = lambda r: r**-5.0  # noqa: E731
    res = verify_source_class(f, 5.0, "Upper")
    assert res.ok and res.c == pytest.approx(1.0)
    assert verify_source_class(f, 4.0, "Upper").ok
    assert not verify_source_class(f, 4.0, "Lower").ok
    assert verify_source_class(f, 5.0, "Lower").ok


def test_certificate_failure_reports_witness():
    err = CertificateFailed("x", witness=3.0)
    assert err.witness == 3.0
