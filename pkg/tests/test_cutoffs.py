import math

import numpy as np
import pytest

from hrlab.barrier import CutoffProfile, Kind, make_cutoff
from hrlab.barrier.cutoffs import bump_power_mass, ell_threshold, transition_log_parts
from hrlab.errors import EllTooSmall


def _fd(f, x, k, h):
    # central stencils for derivatives 1..4
    stencils = {
        1: ([-1, 1], [-0.5, 0.5]),
        2: ([-1, 0, 1], [1, -2, 1]),
        3: ([-2, -1, 1, 2], [-0.5, 1, -1, 0.5]),
        4: ([-2, -1, 0, 1, 2], [1, -4, 6, -4, 1]),
    }
    offs, w = stencils[k]
    return sum(wi * f(x + o * h) for o, wi in zip(offs, w)) / h**k


@pytest.mark.parametrize("kind,scale,xs", [
    (Kind.Rho, 10.0, [2.0, 5.0, 8.0]),
    (Kind.Xi, 100.0, [55.0, 70.0, 90.0]),
    (Kind.Zeta, 1e4, [120.0, 400.0, 2000.0]),
])
def test_derivative_chain_matches_finite_differences(kind, scale, xs):
    c = CutoffProfile(kind, 8, scale)
    f = lambda x: float(c(np.array([x]))[0])  # noqa: E731
    for x in xs:
        d = c.derivs(np.array([x]))[:, 0]
        h = 1e-2 * x if kind is Kind.Zeta else 1e-2
        for k in range(1, 5):
            ref = _fd(f, x, k, h)
            assert d[k] == pytest.approx(ref, rel=2e-3, abs=1e-8 * max(1.0, abs(d[k - 1]) / h))


def test_plateau_and_support():
    xi = CutoffProfile(Kind.Xi, 8, 100.0)
    assert xi(np.array([25.0]))[0] == 1.0
    assert xi(np.array([100.0, 150.0])).tolist() == [0.0, 0.0]
    rho = CutoffProfile(Kind.Rho, 8, 10.0)
    assert rho(np.array([0.0, 10.0])).tolist() == [0.0, 0.0]
    zeta = CutoffProfile(Kind.Zeta, 8, 1e4)
    r = math.sqrt(1e4) * 1.0001
    assert 0 < zeta(np.array([r]))[0] <= 1
    # 1 - zeta is below double resolution here; its logarithm is still finite
    s = 2 * math.log(r) / math.log(1e4) - 1
    lt, _ = transition_log_parts(np.array([s]))
    assert -1e6 < lt[0] < -1e4


def test_transition_complement():
    u = np.linspace(0.01, 0.99, 25)
    lt, l1 = transition_log_parts(u)
    assert np.allclose(np.exp(lt) + np.exp(l1), 1.0, atol=1e-14)
    # symmetry tau(u) + tau(1-u) = 1
    lt2, _ = transition_log_parts(1 - u)
    assert np.allclose(np.exp(lt) + np.exp(lt2), 1.0, atol=1e-14)


def test_ell_threshold():
    assert ell_threshold(2.0) == 9
    assert ell_threshold(3.0) == 7
    with pytest.raises(EllTooSmall):
        make_cutoff(Kind.Rho, 5, 10.0, p=2.0)
    with pytest.raises(EllTooSmall):
        CutoffProfile(Kind.Rho, 4, 10.0)
    with pytest.raises(ValueError):
        make_cutoff(Kind.Rho, None, 10.0)


def test_bump_mass_positive_and_decreasing():
    m = [bump_power_mass(ell) for ell in (5, 8, 12)]
    assert all(x > 0 for x in m)
    assert m[0] > m[1] > m[2]
