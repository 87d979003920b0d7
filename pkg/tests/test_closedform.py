import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hrlab.barrier import RadialClosedForm, Term, apply_Lmu, apply_laplacian, build_H, differentiate
from hrlab.spectral import compute_spectral, eval_P

from .oracles import N5_MU1


def _fd_laplacian(f, r, N, h=1e-4):
    # second-order central differences in r
    d1 = (f(r + h) - f(r - h)) / (2 * h)
    d2 = (f(r + h) - 2 * f(r) + f(r - h)) / h**2
    return d2 + (N - 1) / r * d1


def test_laplacian_of_square():
    lap = apply_laplacian(RadialClosedForm([Term(1.0, 2.0)]), 5).collect()
    assert len(lap) == 1
    assert lap.terms[0].coeff == 10.0 and lap.terms[0].lam == 0.0


def test_Lmu_of_power_is_P_times_shifted_power():
    q = 0.7
    out = apply_Lmu(RadialClosedForm([Term(1.0, -q)]), 5, 1.0).collect()
    assert len(out) == 1
    assert out.terms[0].lam == pytest.approx(-q - 4)
    assert out.terms[0].coeff == pytest.approx(eval_P(-q, 5, 1.0), rel=1e-14)


def test_Lmu_kills_root(spec_n5):
    out = apply_Lmu(RadialClosedForm([Term(1.0, spec_n5.beta_minus)]), 5, 1.0)
    assert out.max_abs_coeff() < 1e-12


def test_H_value_and_boundary(spec_n5):
    H = build_H(spec_n5)
    assert float(H(np.array(10.0))) == pytest.approx(N5_MU1["H_at_10"], rel=1e-12)
    assert abs(H.at_one()) < 1e-15
    assert abs(H.laplacian(5).at_one()) < 1e-12


@settings(max_examples=60, deadline=None)
@given(
    coeffs=st.lists(st.floats(-3, 3), min_size=1, max_size=4),
    lams=st.lists(st.floats(-4, 2), min_size=4, max_size=4),
    logs=st.lists(st.sampled_from([0, 1]), min_size=4, max_size=4),
    r=st.floats(1.5, 20.0),
)
def test_laplacian_matches_finite_differences(coeffs, lams, logs, r):
    f = RadialClosedForm([Term(c, l, k) for c, l, k in zip(coeffs, lams, logs)])
    exact = float(f.laplacian(5)(np.array(r)))
    approx = _fd_laplacian(lambda x: float(f(np.array(x))), r, 5)
    scale = sum(abs(c) for c in coeffs) * max(1.0, r ** max(lams)) * (1 + np.log(r))
    assert exact == pytest.approx(approx, abs=1e-5 * scale)


def test_derivative_of_log_term():
    f = RadialClosedForm([Term(2.0, 3.0, 1)])
    d = differentiate(f)
    r = np.array([2.0, 5.0])
    assert np.allclose(d(r), 2.0 * (3 * r**2 * np.log(r) + r**2))


def test_log_abs_matches_direct(spec_n5):
    H = build_H(spec_n5)
    t = np.linspace(0.1, 30, 50)
    lv, sg = H.log_abs(t)
    assert np.all(sg > 0)
    assert np.allclose(lv, np.log(H(np.exp(t))), rtol=1e-10, atol=1e-12)


def test_longdouble_preserved():
    f = RadialClosedForm([Term(1.0, -1.5)])
    r = np.array([2.0], dtype=np.longdouble)
    assert f(r).dtype == np.longdouble


def test_rejects_higher_log_power():
    with pytest.raises(ValueError):
        RadialClosedForm([Term(1.0, 1.0, 2)])
