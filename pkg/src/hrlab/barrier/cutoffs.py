"""Smooth bump and cutoff profiles with exact derivatives up to order four.

Base bump:      rho(s) = exp(-1/(s(1-s)))  on (0, 1), zero elsewhere.
Transition:     tau(u) = int_0^u rho / int_0^1 rho, a C-infinity step from 0 to 1.
Plateau cutoff: xi(s)   = 1 - tau(2s - 1)   (1 on [0, 1/2], 0 beyond 1).
Log cutoff:     zeta(s) = 1 - tau(s)        (1 for s <= 0, 0 for s >= 1).

Profiles are ell-th powers of the base composed with the physical variable:
rho(t/T)**ell, xi(r/R)**ell and zeta(2 ln r / ln R - 1)**ell.
"""
from __future__ import annotations

import enum
import math
from functools import lru_cache

import numpy as np
from numpy.polynomial.laguerre import laggauss

from ..errors import EllTooSmall

ORDER = 4
_FACT = [1.0, 1.0, 2.0, 6.0, 24.0]


def _phi_derivs(s):
    """phi = log rho = -1/s - 1/(1-s) and its first four derivatives (inside (0,1))."""
    out = []
    for k in range(ORDER + 1):
        out.append(-((-1.0) ** k * _FACT[k] * s ** (-k - 1) + _FACT[k] * (1.0 - s) ** (-k - 1)))
    return out


def _bell(d):
    """Complete Bell polynomials B_0..B_4 in the derivative list d[1..4]."""
    d1, d2, d3, d4 = d[1], d[2], d[3], d[4]
    one = np.ones_like(d1)
    return [
        one,
        d1,
        d2 + d1**2,
        d3 + 3 * d1 * d2 + d1**3,
        d4 + 4 * d1 * d3 + 3 * d2**2 + 6 * d1**2 * d2 + d1**4,
    ]


def bump_log(s):
    s = np.asarray(s, dtype=float)
    inside = (s > 0) & (s < 1)
    out = np.full(s.shape, -np.inf)
    si = s[inside]
    out[inside] = -1.0 / (si * (1.0 - si))
    return out


def bump_derivs(s):
    """Array of shape (5, ...) with rho^(k)(s), k = 0..4."""
    s = np.asarray(s, dtype=float)
    out = np.zeros((ORDER + 1,) + s.shape)
    inside = (s > 0) & (s < 1)
    if np.any(inside):
        si = s[inside]
        ph = _phi_derivs(si)
        val = np.exp(ph[0])
        bell = _bell(ph)
        for k in range(ORDER + 1):
            # underflowed val times a huge polynomial is still zero
            with np.errstate(invalid="ignore", over="ignore"):
                v = val * bell[k]
            out[k][inside] = np.where(val > 0, v, 0.0)
    return out


_LAG_Z, _LAG_W = laggauss(64)


def _log_mollifier_integral(u):
    """log int_0^u rho(s) ds for 0 < u <= 1/2.

    With y = 1/s the integral becomes e^{-(1/u + 1)} int_0^inf e^{-z} g(z) dz,
    g smooth and slowly varying, so Gauss-Laguerre keeps full relative accuracy
    even where the value underflows.
    """
    u = np.asarray(u, dtype=float)
    y0 = 1.0 / u
    Z = y0[..., None] + _LAG_Z
    g = np.exp(-1.0 / (Z - 1.0)) / Z**2
    return -(y0 + 1.0) + np.log(g @ _LAG_W)


LOG_Z = math.log(2.0) + float(_log_mollifier_integral(np.array(0.5)))
Z_BUMP = math.exp(LOG_Z)


def transition_log_parts(u):
    """Return (log tau(u), log(1 - tau(u)))."""
    u = np.asarray(u, dtype=float)
    lt = np.zeros(u.shape)
    l1 = np.zeros(u.shape)
    lt[u <= 0] = -np.inf
    l1[u >= 1] = -np.inf
    lo = (u > 0) & (u <= 0.5)
    hi = (u > 0.5) & (u < 1)
    if np.any(lo):
        li = _log_mollifier_integral(u[lo]) - LOG_Z
        lt[lo] = li
        l1[lo] = np.log1p(-np.exp(li))
    if np.any(hi):
        li = _log_mollifier_integral(1.0 - u[hi]) - LOG_Z
        l1[hi] = li
        lt[hi] = np.log1p(-np.exp(li))
    return lt, l1


def transition_derivs(u):
    """tau^(k)(u) for k = 0..4; tau' = rho / Z."""
    u = np.asarray(u, dtype=float)
    out = np.zeros((ORDER + 1,) + u.shape)
    lt, _ = transition_log_parts(u)
    out[0] = np.exp(lt)
    out[1:] = bump_derivs(u)[:ORDER] / Z_BUMP
    return out


class Kind(str, enum.Enum):
    Rho = "Rho"
    Xi = "Xi"
    Zeta = "Zeta"


def base_profile(kind: Kind, s):
    """(log g(s), [g^(k)(s)]) for the unpowered base of the given kind."""
    s = np.asarray(s, dtype=float)
    if kind is Kind.Rho:
        return bump_log(s), bump_derivs(s)
    if kind is Kind.Xi:
        u = 2.0 * s - 1.0
        _, l1 = transition_log_parts(u)
        d = transition_derivs(u)
        out = np.empty_like(d)
        out[0] = np.exp(l1)
        for k in range(1, ORDER + 1):
            out[k] = -(2.0**k) * d[k]
        return l1, out
    if kind is Kind.Zeta:
        _, l1 = transition_log_parts(s)
        d = transition_derivs(s)
        out = -d
        out[0] = np.exp(l1)
        return l1, out
    raise ValueError(kind)


def compose(fd, sd):
    """Derivatives 0..4 of f(s(x)) from f^(k)(s(x)) and s^(k)(x) (Faa di Bruno)."""
    f0, f1, f2, f3, f4 = fd
    _, s1, s2, s3, s4 = sd
    return np.array(
        [
            f0,
            f1 * s1,
            f2 * s1**2 + f1 * s2,
            f3 * s1**3 + 3 * f2 * s1 * s2 + f1 * s3,
            f4 * s1**4 + 6 * f3 * s1**2 * s2 + f2 * (3 * s2**2 + 4 * s1 * s3) + f1 * s4,
        ]
    )


def power_derivs(gd, ell: float, offset: float = 0.0):
    """Derivatives 0..4 of g**ell divided by g**offset; needs offset <= ell - 4."""
    g = gd[0]
    fd = []
    fall = 1.0
    for j in range(ORDER + 1):
        with np.errstate(divide="ignore", invalid="ignore"):
            fd.append(fall * np.power(g, ell - j - offset))
        fall *= ell - j
    return compose(fd, gd)


def ell_threshold(p: float) -> int:
    """Smallest admissible ell: ceil(4 p') + 1 covers ell >= 4p' and ell >= p'."""
    pc = p / (p - 1.0)
    return int(math.ceil(4.0 * pc - 1e-12)) + 1


def default_ell(p: float) -> int:
    return ell_threshold(p)


class CutoffProfile:
    """ell-th power of a base bump, evaluated in the physical variable.

    ``scale`` is T for Rho (variable t) and R for Xi/Zeta (variable r).
    """

    def __init__(self, kind, ell: int, scale: float):
        self.kind = Kind(kind)
        self.ell = int(ell)
        self.scale = float(scale)
        if self.ell < ORDER + 1:
            raise EllTooSmall(f"ell={ell} < 5 leaves the fourth derivative discontinuous")
        if self.kind is Kind.Zeta and not self.scale > 1:
            raise ValueError("Zeta cutoff needs R > 1")

    def __repr__(self):
        return f"CutoffProfile({self.kind.value}, ell={self.ell}, scale={self.scale:g})"

    def support(self) -> tuple[float, float]:
        """Interval outside of which the profile is constant."""
        if self.kind is Kind.Rho:
            return 0.0, self.scale
        if self.kind is Kind.Xi:
            return self.scale / 2.0, self.scale
        return math.sqrt(self.scale), self.scale

    def inner(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind in (Kind.Rho, Kind.Xi):
            c = 1.0 / self.scale
            z = np.zeros_like(x)
            return np.array([x * c, z + c, z, z, z])
        L = math.log(self.scale)
        return np.array(
            [
                2.0 * np.log(x) / L - 1.0,
                2.0 / (L * x),
                -2.0 / (L * x**2),
                4.0 / (L * x**3),
                -12.0 / (L * x**4),
            ]
        )

    def base(self, x):
        """(log g, derivatives of g(s(x)) in x)."""
        sd = self.inner(x)
        lg, gd = base_profile(self.kind, sd[0])
        return lg, compose(gd, sd)

    def __call__(self, x):
        _, hd = self.base(x)
        return hd[0] ** self.ell

    def log_value(self, x):
        lg, _ = self.base(x)
        return self.ell * lg

    def derivs(self, x, offset: float = 0.0):
        """d^k/dx^k profile for k = 0..4, each divided by g**offset."""
        _, hd = self.base(x)
        return power_derivs(hd, self.ell, offset)


def make_cutoff(kind, ell: int | None, scale: float, p: float | None = None) -> CutoffProfile:
    if ell is None:
        if p is None:
            raise ValueError("give ell or p")
        ell = default_ell(p)
    if p is not None and ell < ell_threshold(p):
        raise EllTooSmall(f"ell={ell} below ceil(4p')+1={ell_threshold(p)} for p={p}")
    return CutoffProfile(kind, ell, scale)


@lru_cache(maxsize=None)
def bump_power_mass(ell: int) -> float:
    """int_0^1 rho(s)**ell ds."""
    from scipy.integrate import quad

    val, _ = quad(lambda s: float(np.exp(ell * bump_log(np.array(s)))), 0.0, 1.0, epsabs=0, epsrel=1e-12, limit=200)
    return val
