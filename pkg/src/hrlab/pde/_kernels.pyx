# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled pentadiagonal LU and fused implicit-explicit step."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, floor, pow

cnp.import_array()

BACKEND = "cython"


cdef class PentaLU:
    """Doolittle LU of a pentadiagonal matrix, no pivoting.

    ``bands[k + 2, i]`` holds A[i, i + k].  The systems assembled here are
    diagonally similar to symmetric positive definite ones, so pivoting is
    not needed.
    """
    cdef readonly Py_ssize_t n
    cdef double[::1] l1, l2, u0, u1, u2

    def __init__(self, double[:, :] bands):
        cdef Py_ssize_t n = bands.shape[1], i
        if bands.shape[0] != 5:
            raise ValueError("expected 5 bands")
        self.n = n
        self.l1 = np.zeros(n)
        self.l2 = np.zeros(n)
        self.u0 = np.zeros(n)
        self.u1 = np.zeros(n)
        self.u2 = np.zeros(n)
        with nogil:
            for i in range(n):
                if i >= 2:
                    self.l2[i] = bands[0, i] / self.u0[i - 2]
                if i >= 1:
                    self.l1[i] = bands[1, i]
                    if i >= 2:
                        self.l1[i] -= self.l2[i] * self.u1[i - 2]
                    self.l1[i] /= self.u0[i - 1]
                self.u0[i] = bands[2, i]
                if i >= 2:
                    self.u0[i] -= self.l2[i] * self.u2[i - 2]
                if i >= 1:
                    self.u0[i] -= self.l1[i] * self.u1[i - 1]
                self.u1[i] = bands[3, i]
                if i >= 1:
                    self.u1[i] -= self.l1[i] * self.u2[i - 1]
                self.u2[i] = bands[4, i]
        for i in range(n):
            if self.u0[i] == 0.0:
                raise ZeroDivisionError(f"zero pivot at row {i}")

    cdef void _solve(self, double[::1] x) noexcept nogil:
        cdef Py_ssize_t n = self.n, i
        for i in range(1, n):
            x[i] -= self.l1[i] * x[i - 1]
            if i >= 2:
                x[i] -= self.l2[i] * x[i - 2]
        for i in range(n - 1, -1, -1):
            if i + 1 < n:
                x[i] -= self.u1[i] * x[i + 1]
            if i + 2 < n:
                x[i] -= self.u2[i] * x[i + 2]
            x[i] /= self.u0[i]

    def solve(self, rhs):
        x = np.array(rhs, dtype=np.float64, copy=True, order="C")
        cdef double[::1] xv = x
        with nogil:
            self._solve(xv)
        return x


cdef inline double _ipow(double x, int k) noexcept nogil:
    cdef double r = 1.0
    while k:
        if k & 1:
            r *= x
        x *= x
        k >>= 1
    return r


def imex_step(PentaLU lu, double[::1] u, double[::1] out, double dt, double[::1] rsig,
              double p, double[::1] f, double[::1] bsrc):
    """out = (I + dt L)^-1 (u + dt (r^sigma |u|^p + f - bsrc)).

    Returns (max |out|, max r^sigma |u|^(p-1)); the second is the explicit
    growth rate used for step control.
    """
    cdef Py_ssize_t n = u.shape[0], i
    cdef double a, g, growth = 0.0, norm = 0.0
    cdef double e = p - 1.0
    cdef int k = <int>e if e == floor(e) and 0.0 <= e <= 64.0 else -1
    if out.shape[0] != n or lu.n != n:
        raise ValueError("size mismatch")
    with nogil:
        for i in range(n):
            a = fabs(u[i])
            g = rsig[i] * (_ipow(a, k) if k >= 0 else pow(a, e))
            if g > growth or g != g:
                growth = g
            out[i] = u[i] + dt * (g * a + f[i] - bsrc[i])
        lu._solve(out)
        for i in range(n):
            a = fabs(out[i])
            if a > norm or a != a:
                norm = a
    return norm, growth
