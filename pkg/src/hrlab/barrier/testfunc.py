"""Barrier H for the homogeneous Navier problem, its F-profile, and test functions.

H solves L_mu H = 0 on r > 1 with H(1) = Delta H(1) = 0 and H >= 0:

    0 < mu < mu_star:  H = c_mu r^alpha_- + (1 - c_mu) r^alpha_+ - r^beta_-
    mu = mu_star:      H = r^alpha + d r^alpha ln r - r^beta_-
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolation
from ..spectral import SpectralData
from .closedform import RadialClosedForm, Term
from .cutoffs import CutoffProfile, Kind, make_cutoff


def build_H(spec: SpectralData) -> RadialClosedForm:
    if spec.degenerate:
        d = spec.d_mu_star
        al = spec.alpha
        return RadialClosedForm([Term(1.0, al), Term(d, al, 1), Term(-1.0, spec.beta_minus)])
    c = spec.c_mu
    return RadialClosedForm(
        [Term(c, spec.alpha_minus), Term(1.0 - c, spec.alpha_plus), Term(-1.0, spec.beta_minus)]
    )


@dataclass(frozen=True)
class FProfile:
    """F(t) = e^{-beta_- t} H(e^t) and its first two derivatives."""

    spec: SpectralData

    def _parts(self):
        s = self.spec
        if s.degenerate:
            return s.alpha - s.beta_minus, s.d_mu_star
        return s.alpha_minus - s.beta_minus, s.alpha_plus - s.beta_minus

    @property
    def gamma(self) -> float:
        return self.spec.alpha_minus - self.spec.beta_minus

    @property
    def delta(self) -> float:
        return self.spec.alpha_plus - self.spec.beta_minus

    def F(self, t):
        t = np.asarray(t, dtype=float)
        s = self.spec
        if s.degenerate:
            k, d = self._parts()
            return np.exp(k * t) * (1.0 + d * t) - 1.0
        c = s.c_mu
        return c * np.exp(self.gamma * t) + (1.0 - c) * np.exp(self.delta * t) - 1.0

    def dF(self, t):
        t = np.asarray(t, dtype=float)
        s = self.spec
        if s.degenerate:
            k, d = self._parts()
            return np.exp(k * t) * (k * (1.0 + d * t) + d)
        c, g, dl = s.c_mu, self.gamma, self.delta
        return c * g * np.exp(g * t) + (1.0 - c) * dl * np.exp(dl * t)

    def d2F(self, t):
        t = np.asarray(t, dtype=float)
        s = self.spec
        if s.degenerate:
            k, d = self._parts()
            return np.exp(k * t) * (k * k * (1.0 + d * t) + 2.0 * k * d)
        c, g, dl = s.c_mu, self.gamma, self.delta
        return c * g * g * np.exp(g * t) + (1.0 - c) * dl * dl * np.exp(dl * t)

    def dF0_formula(self) -> float:
        """Closed form of F'(0) (simple roots only)."""
        return self.delta * self.gamma / 2.0

    def d2F0_formula(self) -> float:
        g, d = self.gamma, self.delta
        return g * d * (g + d - 2.0) / 2.0


def profile_F(spec: SpectralData) -> FProfile:
    return FProfile(spec)


class SpaceKind(str, enum.Enum):
    FirstKind = "FirstKind"
    SecondKind = "SecondKind"


class RadialDerivs:
    """Samples of H and the derivative combinations the product rule needs."""

    def __init__(self, H: RadialClosedForm, N: int, mu: float, r):
        self.r = np.asarray(r, dtype=float)
        H1 = H.derivative()
        lapH = H.laplacian(N)
        self.H = H(self.r)
        self.H1 = H1(self.r)
        self.H2 = H1.derivative()(self.r)
        self.lapH = lapH(self.r)
        self.lapH1 = lapH.derivative()(self.r)
        self.LH = H.hardy_rellich(N, mu)(self.r)


def lmu_product(hd: RadialDerivs, cd, N: int):
    """L_mu(H c) for radial H and cutoff c from the fourth-order product rule.

    ``cd`` holds c, c', c'', c''', c'''' (all optionally divided by a common
    power of the base profile; the expression is linear in ``cd``).
    For radial u, v:  grad u . grad v = u'v',  sum u_ij v_ij = u''v'' + (N-1) u'v'/r^2.
    """
    r = hd.r
    c0, c1, c2, c3, c4 = cd
    k = N - 1.0
    lap_c = c2 + k * c1 / r
    lap_c1 = c3 + k * (c2 / r - c1 / r**2)
    bilap_c = c4 + k * (c3 / r - 2.0 * c2 / r**2 + 2.0 * c1 / r**3) + k * lap_c1 / r
    hess = hd.H2 * c2 + k * hd.H1 * c1 / r**2
    return (
        c0 * hd.LH
        + hd.H * bilap_c
        + 2.0 * hd.lapH * lap_c
        + 4.0 * hd.H1 * lap_c1
        + 4.0 * c1 * hd.lapH1
        + 4.0 * hess
    )


def laplacian_product(hd: RadialDerivs, cd, N: int):
    c0, c1, c2 = cd[0], cd[1], cd[2]
    return c0 * hd.lapH + 2.0 * hd.H1 * c1 + hd.H * (c2 + (N - 1.0) * c1 / hd.r)


class TestFunction:
    """phi(t, r) = rho_T(t) H(r) c_R(r) with c_R = xi_R (first kind) or zeta_R (second kind)."""

    def __init__(self, spec: SpectralData, kind, T: float, R: float, ell: int):
        self.spec = spec
        self.kind = SpaceKind(kind)
        self.T = float(T)
        self.R = float(R)
        self.ell = int(ell)
        self.H = build_H(spec)
        self.time_part = CutoffProfile(Kind.Rho, ell, T)
        ck = Kind.Xi if self.kind is SpaceKind.FirstKind else Kind.Zeta
        self.space_cutoff = CutoffProfile(ck, ell, R)

    def _space(self, r):
        r = np.asarray(r, dtype=float)
        return RadialDerivs(self.H, self.spec.N, self.spec.mu, r), self.space_cutoff.derivs(r)

    def space_value(self, r):
        hd, cd = self._space(r)
        return hd.H * cd[0]

    def space_laplacian(self, r):
        hd, cd = self._space(r)
        return laplacian_product(hd, cd, self.spec.N)

    def space_Lmu(self, r):
        hd, cd = self._space(r)
        return lmu_product(hd, cd, self.spec.N)

    def phi(self, t, r):
        return np.multiply.outer(self.time_part(t), self.space_value(r))

    def phi_t(self, t, r):
        return np.multiply.outer(self.time_part.derivs(t)[1], self.space_value(r))

    def lap_phi(self, t, r):
        return np.multiply.outer(self.time_part(t), self.space_laplacian(r))

    def Lmu_phi(self, t, r):
        return np.multiply.outer(self.time_part(t), self.space_Lmu(r))


def assemble_test_function(spec: SpectralData, kind, T: float, R: float, ell: int | None = None, p: float | None = None):
    if T < 10 or R < 16:
        raise ValueError(f"need T >= 10 and R >= 16, got T={T}, R={R}")
    if ell is None:
        ell = make_cutoff(Kind.Rho, None, T, p=p).ell
    elif p is not None:
        make_cutoff(Kind.Rho, ell, T, p=p)
    return TestFunction(spec, kind, T, R, ell)


def verify_admissible(tf: TestFunction, n_t: int = 201, n_r: int = 2001) -> dict:
    """Sample-based admissibility report for a test function."""
    t = np.linspace(0.0, 1.25 * tf.T, n_t)
    r = np.geomspace(1.0, 1.5 * tf.R, n_r)
    phi = tf.phi(t, r)
    scale = max(1.0, float(np.max(np.abs(phi))))
    i, j = np.unravel_index(np.argmin(phi), phi.shape)
    min_phi = float(phi[i, j])
    lap_at_1 = float(abs(tf.space_laplacian(np.array([1.0]))[0]))
    val_at_1 = float(abs(tf.space_value(np.array([1.0]))[0]))
    outside_r = r >= tf.R
    outside_t = (t >= tf.T) | (t <= 0.0)
    tail_r = float(np.max(np.abs(phi[:, outside_r]))) if outside_r.any() else 0.0
    tail_t = float(np.max(np.abs(phi[outside_t, :]))) if outside_t.any() else 0.0
    checks = {
        "nonnegative": min_phi >= -1e-12 * scale,
        "boundary_value_zero": val_at_1 <= 1e-15,
        "boundary_laplacian_zero": lap_at_1 <= 1e-10,
        "compact_support": tail_r == 0.0 and tail_t == 0.0,
    }
    return {
        "kind": tf.kind.value,
        "T": tf.T,
        "R": tf.R,
        "ell": tf.ell,
        "min_phi": min_phi,
        "worst_point": {"t": float(t[i]), "r": float(r[j])},
        "abs_phi_at_r1": val_at_1,
        "abs_lap_phi_at_r1": lap_at_1,
        "max_phi_outside_support": max(tail_r, tail_t),
        "checks": checks,
        "ok": all(checks.values()),
    }


def certify_barrier(spec: SpectralData, n_samples: int = 10_000, r_max: float = 1e8, t_max: float = 50.0) -> dict:
    """Closed-form and sampled checks that H solves the homogeneous Navier problem."""
    N, mu = spec.N, spec.mu
    H = build_H(spec)
    LH = H.hardy_rellich(N, mu)
    lapH = H.laplacian(N)
    lh_rel = LH.max_abs_coeff() / max(1.0, H.max_abs_coeff())
    r = np.geomspace(1.0, r_max, n_samples)
    h = H(r)
    scale = max(1.0, float(H(np.array([2.0]))[0]))
    Fp = profile_F(spec)
    tt = np.linspace(0.0, t_max, 10_001)
    out = {
        "H_terms": [[t.coeff, t.lam, t.logpow] for t in H],
        "Lmu_H_terms": [[t.coeff, t.lam, t.logpow] for t in LH],
        "Lmu_H_max_rel_coeff": lh_rel,
        "H_at_1": H.at_one(),
        "lap_H_at_1": lapH.at_one(),
        "min_H_sampled": float(np.min(h)),
        "H_scale": scale,
        "F0": float(Fp.F(0.0)),
        "dF0": float(Fp.dF(0.0)),
    }
    checks = {
        "Lmu_H_zero": lh_rel <= 1e-10,
        "H_at_1_zero": abs(out["H_at_1"]) <= 1e-12,
        "lap_H_at_1_zero": abs(out["lap_H_at_1"]) <= 1e-12,
        "H_nonnegative": out["min_H_sampled"] >= -1e-12 * scale,
        "F0_zero": abs(out["F0"]) <= 1e-12,
        "dF0_positive": out["dF0"] > 0,
    }
    if spec.degenerate:
        out["d_mu_star"] = spec.d_mu_star
        out["min_dF_on_grid"] = float(np.min(Fp.dF(tt)))
        checks["dF_positive"] = out["min_dF_on_grid"] > 0
    else:
        out["c_mu"] = spec.c_mu
        out["dF0_formula"] = Fp.dF0_formula()
        out["d2F0"] = float(Fp.d2F(0.0))
        out["d2F0_formula"] = Fp.d2F0_formula()
        out["min_d2F_on_grid"] = float(np.min(Fp.d2F(tt)))
        checks["d2F_positive"] = out["min_d2F_on_grid"] > 0
        checks["dF0_matches_formula"] = math.isclose(out["dF0"], out["dF0_formula"], rel_tol=1e-10)
        checks["d2F0_matches_formula"] = math.isclose(out["d2F0"], out["d2F0_formula"], rel_tol=1e-10)
    out["checks"] = checks
    out["ok"] = all(checks.values())
    return out


def contract_H_positive(H: RadialClosedForm, r) -> np.ndarray:
    h = H(r)
    if np.any(h <= 0):
        k = int(np.argmin(h))
        raise ContractViolation(f"H <= 0 at r={float(np.asarray(r)[k])!r}")
    return h


