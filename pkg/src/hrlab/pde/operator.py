"""Second-order finite differences for L_mu = Delta^2 - mu r^-4 on a log grid.

With t = ln r the radial Laplacian is r^-2 (d_tt + (N-2) d_t); central
differences in t give a tridiagonal T on the interior nodes.  The operator is
applied in mixed form, w = Delta u and L_mu u = Delta w - mu r^-4 u, with
Dirichlet values for u and w at both ends (Navier conditions at r = 1, far
field closure at R_max).  Eliminating w gives the pentadiagonal T^2 - mu r^-4.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import AssemblyError
from .grid import RadialGrid


@dataclass(frozen=True)
class BoundaryData:
    """Dirichlet values (u, Delta u) at r = 1 and r = R_max."""

    u_inner: float = 0.0
    w_inner: float = 0.0
    u_outer: float = 0.0
    w_outer: float = 0.0

    @property
    def homogeneous(self) -> bool:
        return not any((self.u_inner, self.w_inner, self.u_outer, self.w_outer))

    @classmethod
    def from_closed_form(cls, f, N: int, R_max: float, inner: bool = False) -> "BoundaryData":
        """Far-field (and optionally inner) values of a closed-form profile."""
        lap = f.laplacian(N)
        out = dict(u_outer=float(f(np.array(R_max))), w_outer=float(lap(np.array(R_max))))
        if inner:
            out.update(u_inner=float(f(np.array(1.0))), w_inner=float(lap(np.array(1.0))))
        return cls(**out)


@dataclass
class BandedOperator:
    grid: RadialGrid
    N: int
    mu: float
    lower: np.ndarray = field(repr=False)
    diag: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)
    potential: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.grid.n_interior

    def laplacian(self, u_full: np.ndarray) -> np.ndarray:
        """Discrete Laplacian at interior nodes of nodal values on all M+1 nodes."""
        return self.lower * u_full[:-2] + self.diag * u_full[1:-1] + self.upper * u_full[2:]

    def tri_apply(self, x: np.ndarray, left: float = 0.0, right: float = 0.0) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.lower[1:] * x[:-1]
        y[:-1] += self.upper[:-1] * x[1:]
        y[0] += self.lower[0] * left
        y[-1] += self.upper[-1] * right
        return y

    def apply(self, u_full: np.ndarray, bc: BoundaryData | None = None) -> np.ndarray:
        """Discrete L_mu at interior nodes.

        The boundary values of u are taken from ``u_full``; those of w = Delta u
        from ``bc`` (zero by default, the Navier condition).
        """
        bc = bc or BoundaryData(u_inner=u_full[0], u_outer=u_full[-1])
        w = self.laplacian(u_full)
        return self.tri_apply(w, bc.w_inner, bc.w_outer) - self.potential * u_full[1:-1]

    def bands(self) -> np.ndarray:
        """Row-aligned bands of T^2 - mu r^-4: out[k + 2, i] = A[i, i + k]."""
        n = self.n
        lo, d, up = self.lower, self.diag, self.upper
        A = np.zeros((5, n))
        # (T^2)[i, i+k] = sum_j T[i, j] T[j, i+k]
        A[0, 2:] = lo[2:] * lo[1:-1]
        A[1, 1:] = lo[1:] * d[:-1] + d[1:] * lo[1:]
        A[2] = d * d
        A[2, 1:] += lo[1:] * up[:-1]
        A[2, :-1] += up[:-1] * lo[1:]
        A[3, :-1] = d[:-1] * up[:-1] + up[:-1] * d[1:]
        A[4, :-2] = up[:-2] * up[1:-1]
        A[2] -= self.potential
        return A

    def implicit_bands(self, dt: float) -> np.ndarray:
        """Bands of I + dt (T^2 - mu r^-4)."""
        A = dt * self.bands()
        A[2] += 1.0
        if not np.all(np.isfinite(A)):
            raise AssemblyError("non-finite entries in the implicit system")
        return A

    def boundary_source(self, bc: BoundaryData) -> np.ndarray:
        """Contribution of the Dirichlet data to L_mu u at interior nodes: T b_u + b_w."""
        n = self.n
        bu = np.zeros(n)
        bu[0] = self.lower[0] * bc.u_inner
        bu[-1] += self.upper[-1] * bc.u_outer
        out = self.tri_apply(bu)
        out[0] += self.lower[0] * bc.w_inner
        out[-1] += self.upper[-1] * bc.w_outer
        return out

    def dense(self) -> np.ndarray:
        A = self.bands()
        n = self.n
        D = np.zeros((n, n))
        for k in range(-2, 3):
            idx = np.arange(max(0, -k), min(n, n - k))
            D[idx, idx + k] = A[k + 2, idx]
        return D


def assemble(grid: RadialGrid, N: int, mu: float, dtype=np.float64) -> BandedOperator:
    """Stencil on the interior nodes; ``dtype=np.longdouble`` for roundoff-sensitive diagnostics."""
    if np.dtype(dtype) == np.float64:
        h = grid.h_log
        r = grid.interior
    else:
        h = np.log(np.asarray(grid.R_max, dtype=dtype)) / grid.M
        r = np.exp(h * np.arange(1, grid.M, dtype=dtype))
    inv_r2 = r**-2
    a = 1 / h**2
    b = (N - 2) / (2 * h)
    lower = inv_r2 * (a - b)
    diag = -2 * a * inv_r2
    upper = inv_r2 * (a + b)
    pot = mu * r**-4
    if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
        raise AssemblyError("non-finite stencil coefficients")
    return BandedOperator(grid, int(N), float(mu), lower, diag, upper, pot)


def node_radii(grid: RadialGrid, dtype=np.float64) -> np.ndarray:
    """All M+1 node radii in the requested precision."""
    if np.dtype(dtype) == np.float64:
        return grid.r
    h = np.log(np.asarray(grid.R_max, dtype=dtype)) / grid.M
    return np.exp(h * np.arange(grid.M + 1, dtype=dtype))


def consistency_residual(f, grid: RadialGrid, N: int, mu: float, rhs=None, skip: int = 1) -> float:
    """max |L_h f - rhs| over interior rows at least ``skip`` rows from either end.

    Evaluated in extended precision: the composed stencil scales like h^-4 and
    float64 roundoff would mask the truncation error on fine grids.  Rows next
    to the boundary see the exact Delta f as Dirichlet data for w and carry an
    O(1) truncation error, hence the default skip.
    """
    ld = np.longdouble
    op = assemble(grid, N, mu, dtype=ld)
    r = node_radii(grid, ld)
    u = f(r)
    lap = f.laplacian(N)
    bc = BoundaryData(u_inner=u[0], u_outer=u[-1], w_inner=lap(r[0]), w_outer=lap(r[-1]))
    res = op.apply(u, bc)
    if rhs is not None:
        res = res - rhs(r[1:-1])
    sl = slice(skip, len(res) - skip) if skip else slice(None)
    return float(np.max(np.abs(res[sl])))
