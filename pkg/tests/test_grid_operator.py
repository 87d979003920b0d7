import math

import numpy as np
import pytest

from hrlab.barrier import RadialClosedForm, Term, build_H
from hrlab.errors import InvalidGrid
from hrlab.pde import BoundaryData, assemble, build_grid, consistency_residual
from hrlab.pde.backend import load
from hrlab.spectral import eval_P


def test_grid_layout():
    g = build_grid(100.0, 1000)
    assert len(g.r) == 1001
    assert g.r[0] == 1.0 and g.r[-1] == 100.0
    ratios = g.r[1:] / g.r[:-1]
    assert np.allclose(ratios, ratios[0], rtol=1e-12)
    assert g.h_log == pytest.approx(math.log(100) / 1000)
    assert g.refine().M == 2000


@pytest.mark.parametrize("R,M", [(100.0, 100), (10.0, 1000), (100.0, 500.5)])
def test_grid_rejects(R, M):
    with pytest.raises(InvalidGrid):
        build_grid(R, M)


def test_bands_match_dense_product():
    g = build_grid(50.0, 200)
    op = assemble(g, 5, 1.0)
    n = op.n
    T = np.diag(op.diag) + np.diag(op.lower[1:], -1) + np.diag(op.upper[:-1], 1)
    ref = T @ T - np.diag(op.potential)
    assert np.allclose(op.dense(), ref, rtol=1e-13, atol=1e-13 * np.abs(ref).max())
    assert op.dense().shape == (n, n)


def _order(f, N, mu, rhs=None, Ms=(500, 1000, 2000)):
    errs = [consistency_residual(f, build_grid(100.0, M), N, mu, rhs) for M in Ms]
    return [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)], errs


def test_second_order_on_barrier(spec_n5):
    orders, _ = _order(build_H(spec_n5), 5, 1.0)
    assert all(abs(o - 2.0) <= 0.2 for o in orders), orders


def test_second_order_on_root_power(spec_n5):
    f = RadialClosedForm([Term(1.0, spec_n5.beta_minus)])
    orders, _ = _order(f, 5, 1.0)
    assert all(abs(o - 2.0) <= 0.2 for o in orders), orders


def test_power_matches_symbol():
    q = 0.68
    g = build_grid(100.0, 2000)
    op = assemble(g, 5, 1.0)
    f = RadialClosedForm([Term(1.0, -q)])
    u = f(g.r)
    lap = f.laplacian(5)
    bc = BoundaryData(u[0], float(lap(np.array(1.0))), u[-1], float(lap(np.array(100.0))))
    got = op.apply(u, bc)[1:-1]
    r = g.interior[1:-1]
    want = eval_P(-q, 5, 1.0) * r ** (-q - 4)
    assert np.max(np.abs(got - want) / np.abs(want)) < 0.01


def test_dirichlet_row_enforces_zero():
    # a constant violates u(1) = 0; the solve still returns u = 0 on the boundary by construction
    g = build_grid(50.0, 200)
    op = assemble(g, 5, 1.0)
    mod = load("python")
    A = 1e-3 * op.bands()
    A[2] += 1.0
    lu = mod.PentaLU(A)
    u = np.ones(op.n)
    x = lu.solve(u.copy())
    full = np.concatenate(([0.0], x, [0.0]))
    assert full[0] == 0.0 and full[-1] == 0.0
    # the jump at the wall pulls the first interior value far below 1
    assert x[0] < 0.5 < x[op.n // 2]


def test_boundary_source_matches_apply():
    g = build_grid(50.0, 300)
    op = assemble(g, 5, 1.0)
    bc = BoundaryData(u_inner=0.3, w_inner=-1.0, u_outer=0.2, w_outer=0.5)
    u = np.zeros(g.M + 1)
    u[0], u[-1] = bc.u_inner, bc.u_outer
    assert np.allclose(op.apply(u, bc), op.boundary_source(bc), rtol=1e-12, atol=1e-12)
