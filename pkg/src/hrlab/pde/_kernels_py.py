"""Fallback kernels on top of LAPACK banded LU."""
import numpy as np
from scipy.linalg.lapack import dgbtrf, dgbtrs

BACKEND = "python"


class PentaLU:
    def __init__(self, bands):
        bands = np.asarray(bands, dtype=np.float64)
        if bands.shape[0] != 5:
            raise ValueError("expected 5 bands")
        n = bands.shape[1]
        self.n = n
        # LAPACK layout with kl = ku = 2 and two extra rows for fill-in
        ab = np.zeros((7, n))
        for k in range(-2, 3):
            # A[i, i+k] -> ab[4 - k, i + k]
            if k >= 0:
                ab[4 - k, k:] = bands[k + 2, : n - k]
            else:
                ab[4 - k, : n + k] = bands[k + 2, -k:]
        self._lu, self._piv, info = dgbtrf(ab, 2, 2)
        if info > 0:
            raise ZeroDivisionError(f"zero pivot at row {info - 1}")
        if info < 0:
            raise ValueError(f"dgbtrf argument {-info} invalid")

    def solve(self, rhs):
        x, info = dgbtrs(self._lu, 2, 2, np.asarray(rhs, dtype=np.float64), self._piv)
        if info != 0:
            raise ValueError(f"dgbtrs failed with info={info}")
        return x


def imex_step(lu, u, out, dt, rsig, p, f, bsrc):
    a = np.abs(u)
    g = rsig * a ** (p - 1.0)
    rhs = u + dt * (g * a + f - bsrc)
    out[:] = lu.solve(rhs)
    with np.errstate(invalid="ignore"):
        norm = float(np.max(np.abs(out)))
        growth = float(np.max(g))
    return norm, growth
