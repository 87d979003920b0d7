import numpy as np
import pytest

from hrlab.barrier import (
    SpaceKind,
    assemble_test_function,
    build_H,
    certify_barrier,
    profile_F,
    verify_admissible,
)
from hrlab.spectral import compute_spectral, mu_star

from .oracles import N5_MU1


@pytest.mark.parametrize("N", [5, 6, 9, 12])
@pytest.mark.parametrize("frac", [0.1, 0.5, 0.9, 1.0])
def test_certificate_passes(N, frac):
    rep = certify_barrier(compute_spectral(N, frac * mu_star(N)))
    assert rep["ok"], rep["checks"]
    assert rep["Lmu_H_max_rel_coeff"] <= 1e-10


def test_F_profile_values(spec_n5):
    F = profile_F(spec_n5)
    assert F.F(0.0) == pytest.approx(0.0, abs=1e-14)
    assert F.dF(0.0) == pytest.approx(N5_MU1["dF0"], rel=1e-12)
    t = np.linspace(0, 30, 10_000)
    assert np.all(F.F(t) >= 0)


def test_F_profile_critical(spec_n5_star):
    F = profile_F(spec_n5_star)
    t = np.linspace(0, 50, 2001)
    assert np.all(F.dF(t) > 0)


def test_H_positive_off_boundary(spec_n5):
    H = build_H(spec_n5)
    r = np.geomspace(1.0001, 1e8, 5000)
    assert np.all(H(r) > 0)


@pytest.mark.parametrize("kind", list(SpaceKind))
def test_test_function_admissible(spec_n5, kind):
    tf = assemble_test_function(spec_n5, kind, T=50.0, R=200.0, p=3.0)
    rep = verify_admissible(tf)
    assert rep["ok"], rep


def test_test_function_plateau(spec_n5):
    tf = assemble_test_function(spec_n5, SpaceKind.FirstKind, T=50.0, R=200.0, p=3.0)
    r = np.array([2.0, 10.0, 90.0])
    assert np.allclose(tf.space_value(r), build_H(spec_n5)(r))
    assert np.all(tf.space_value(np.array([200.0, 300.0])) == 0)


def test_test_function_size_limits(spec_n5):
    with pytest.raises(ValueError):
        assemble_test_function(spec_n5, SpaceKind.FirstKind, T=5.0, R=200.0, p=3.0)
