"""Indicial polynomial, its roots, and the two critical exponents.

Everything here is a pure function of (N, mu, sigma, p, eta).  The radial
power r**lam solves L_mu v = 0 exactly when lam is a root of

    P(lam) = lam (lam - 2)(lam + N - 2)(lam + N - 4) - mu = M(lam) M(lam - 2) - mu,

with M(lam) = lam (lam + N - 2) the symbol of the radial Laplacian.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidDimension, InvalidParams, MuOutOfRange, WrongRegime

#: relative tolerance for deciding mu == mu_star, p == p_crit, eta == eta_crit
EQ_RTOL = 1e-12


def mu_star(N: int) -> float:
    """Best Hardy-Rellich constant (N(N-4)/4)**2."""
    if int(N) != N or N < 5:
        raise InvalidDimension(f"N must be an integer >= 5, got {N!r}")
    return (N * (N - 4) / 4.0) ** 2


def eval_M(lam, N):
    return lam * (lam + N - 2)


def eval_M_prime(lam, N):
    return 2 * lam + N - 2


def eval_P(lam, N, mu):
    return lam * (lam - 2) * (lam + N - 2) * (lam + N - 4) - mu


def eval_P_prime(lam, N):
    return eval_M_prime(lam, N) * eval_M(lam - 2, N) + eval_M(lam, N) * eval_M_prime(lam - 2, N)


def _close(x: float, y: float, rtol: float = EQ_RTOL) -> bool:
    return abs(x - y) <= rtol * max(1.0, abs(x), abs(y))


@dataclass(frozen=True)
class Params:
    """Problem data.  Construction never raises; call :meth:`validate`."""

    N: int
    mu: float
    sigma: float
    p: float
    eta: float | None = None

    @property
    def p_conj(self) -> float:
        return self.p / (self.p - 1.0)

    def problems(self) -> list[str]:
        out = []
        if int(self.N) != self.N or self.N < 5:
            out.append(f"N={self.N!r} must be an integer >= 5")
        if not self.sigma > -4:
            out.append(f"sigma={self.sigma!r} must exceed -4")
        if not self.p > 1:
            out.append(f"p={self.p!r} must exceed 1")
        if not self.mu > 0:
            out.append(f"mu={self.mu!r} must be positive")
        elif not out and self.mu > mu_star(self.N) * (1 + EQ_RTOL):
            out.append(f"mu={self.mu!r} exceeds mu_star={mu_star(self.N)!r}")
        if self.eta is not None and not math.isfinite(self.eta):
            out.append("eta must be finite")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def validate(self) -> "Params":
        bad = self.problems()
        if bad:
            raise InvalidParams("; ".join(bad))
        return self


@dataclass(frozen=True)
class SpectralData:
    """Roots of P and the derived coefficients for one (N, mu).

    ``degenerate`` is True at mu = mu_star, where alpha_minus == alpha_plus
    == alpha = -(N-4)/2 is a double root.
    """

    N: int
    mu: float
    a: float
    A_mu: float
    B_mu: float
    mu_star: float
    mu_N: float
    degenerate: bool
    alpha_minus: float
    alpha_plus: float
    beta_minus: float
    beta_plus: float

    @property
    def alpha(self) -> float:
        if not self.degenerate:
            raise WrongRegime("alpha (double root) only exists at mu = mu_star")
        return self.alpha_minus

    @property
    def roots(self) -> tuple[float, ...]:
        if self.degenerate:
            return (self.beta_minus, self.alpha_minus, self.beta_plus)
        return (self.beta_minus, self.alpha_minus, self.alpha_plus, self.beta_plus)

    @property
    def c_mu(self) -> float:
        return coefficient_c_mu(self)

    @property
    def d_mu_star(self) -> float:
        return coefficient_d_mu_star(self)

    def P(self, lam):
        return eval_P(lam, self.N, self.mu)

    def M(self, lam):
        return eval_M(lam, self.N)

    def as_dict(self) -> dict:
        d = {
            "N": self.N,
            "mu": self.mu,
            "a": self.a,
            "A_mu": self.A_mu,
            "B_mu": self.B_mu,
            "mu_star": self.mu_star,
            "mu_N": self.mu_N,
            "degenerate": self.degenerate,
            "beta_minus": self.beta_minus,
            "beta_plus": self.beta_plus,
        }
        if self.degenerate:
            d["alpha"] = self.alpha_minus
            d["d_mu_star"] = self.d_mu_star
        else:
            d["alpha_minus"] = self.alpha_minus
            d["alpha_plus"] = self.alpha_plus
            d["c_mu"] = self.c_mu
        return d


def _polish(lam: float, N: int, mu: float) -> float:
    # One Newton step, kept only if it does not increase |P|.
    d = eval_P_prime(lam, N)
    if d == 0.0:
        return lam
    cand = lam - eval_P(lam, N, mu) / d
    if abs(eval_P(cand, N, mu)) <= abs(eval_P(lam, N, mu)):
        return cand
    return lam


def compute_spectral(N: int, mu: float) -> SpectralData:
    ms = mu_star(N)
    if not mu > 0:
        raise InvalidParams(f"mu must be positive, got {mu!r}")
    if mu > ms and not _close(mu, ms):
        raise MuOutOfRange(f"mu={mu!r} exceeds mu_star={ms!r}")
    a = (N - 4) / 2.0
    s = (a + 1.0) ** 2
    B = s + 1.0 + math.sqrt(4.0 * s + mu)
    degenerate = abs(mu - ms) <= EQ_RTOL * ms
    # A*B = mu_star - mu, which avoids the cancellation in s + 1 - sqrt(4s + mu)
    A = 0.0 if degenerate else (ms - mu) / B
    sB = math.sqrt(B)
    beta_minus = _polish(-a - sB, N, mu)
    beta_plus = _polish(-a + sB, N, mu)
    if degenerate:
        alpha_minus = alpha_plus = -a
        mu_N = a
    else:
        sA = math.sqrt(A)
        alpha_minus = _polish(-a - sA, N, mu)
        alpha_plus = _polish(-a + sA, N, mu)
        mu_N = -alpha_minus
    return SpectralData(
        N=N,
        mu=mu,
        a=a,
        A_mu=A,
        B_mu=B,
        mu_star=ms,
        mu_N=mu_N,
        degenerate=degenerate,
        alpha_minus=alpha_minus,
        alpha_plus=alpha_plus,
        beta_minus=beta_minus,
        beta_plus=beta_plus,
    )


def coefficient_c_mu(spec: SpectralData) -> float:
    if spec.degenerate:
        raise WrongRegime("c_mu is defined only for 0 < mu < mu_star")
    N = spec.N
    return (eval_M(spec.beta_minus, N) - eval_M(spec.alpha_plus, N)) / (
        2.0 * (spec.alpha_minus - spec.alpha_plus)
    )


def coefficient_d_mu_star(spec: SpectralData) -> float:
    if not spec.degenerate:
        raise WrongRegime("d_mu_star is defined only for mu = mu_star")
    N = spec.N
    return (eval_M(spec.beta_minus, N) - eval_M(spec.alpha_minus, N)) / 2.0


def mu_N(N: int, mu: float) -> float:
    return compute_spectral(N, mu).mu_N


def critical_exponent_p(N: int, mu: float, sigma: float) -> float:
    """Fujita-type threshold 1 + (sigma + 4) / mu_N."""
    return 1.0 + (sigma + 4.0) / mu_N(N, mu)


def critical_eta(p: float, sigma: float) -> float:
    """Decay threshold 4 + (sigma + 4) / (p - 1) for the source."""
    if not p > 1:
        raise InvalidParams(f"p must exceed 1, got {p!r}")
    return 4.0 + (sigma + 4.0) / (p - 1.0)


def limit_mu_zero(N: int, sigma: float, p: float | None = None) -> dict:
    """Diagnostic mu -> 0+ limits.  mu = 0 itself is outside the theorems."""
    mu_star(N)
    out = {
        "alpha_plus": 0.0,
        "alpha_minus": -(N - 4.0),
        "mu_N": N - 4.0,
        "p_crit": 1.0 + (sigma + 4.0) / (N - 4.0),
        "eta_upper": N + 0.0,
    }
    if p is not None:
        out["eta_crit"] = critical_eta(p, sigma)
    return out


class Regime(str, enum.Enum):
    InvalidParams = "InvalidParams"
    Nonexistence_Subcritical = "Nonexistence_Subcritical"
    Nonexistence_Critical = "Nonexistence_Critical"
    Open_MuStarCritical = "Open_MuStarCritical"
    Existence_SomeSource = "Existence_SomeSource"
    SecondNonexistence = "SecondNonexistence"
    SecondExistence = "SecondExistence"
    EtaOutsideScope = "EtaOutsideScope"


@dataclass(frozen=True)
class RegimeLabel:
    label: Regime
    p_crit: float | None = None
    eta_crit: float | None = None
    mu_N: float | None = None
    reason: str = ""

    def as_dict(self) -> dict:
        return {
            "label": self.label.value,
            "p_crit": self.p_crit,
            "eta_crit": self.eta_crit,
            "mu_N": self.mu_N,
            "reason": self.reason,
        }


def classify_regime(params: Params) -> RegimeLabel:
    """Total decision procedure following the existence/nonexistence theorems."""
    bad = params.problems()
    if bad:
        return RegimeLabel(Regime.InvalidParams, reason="; ".join(bad))
    spec = compute_spectral(params.N, params.mu)
    pc = 1.0 + (params.sigma + 4.0) / spec.mu_N
    ec = critical_eta(params.p, params.sigma)
    common = dict(p_crit=pc, eta_crit=ec, mu_N=spec.mu_N)
    if _close(params.p, pc):
        if spec.degenerate:
            return RegimeLabel(Regime.Open_MuStarCritical, reason="mu = mu_star and p = p_crit", **common)
        return RegimeLabel(Regime.Nonexistence_Critical, reason="0 < mu < mu_star and p = p_crit", **common)
    if params.p < pc:
        return RegimeLabel(Regime.Nonexistence_Subcritical, reason="1 < p < p_crit", **common)
    if params.eta is None:
        return RegimeLabel(Regime.Existence_SomeSource, reason="p > p_crit", **common)
    eta = params.eta
    upper = spec.mu_N + 4.0
    if eta < ec and not _close(eta, ec):
        return RegimeLabel(Regime.SecondNonexistence, reason="p > p_crit and eta < eta_crit", **common)
    if eta < upper and not _close(eta, upper):
        return RegimeLabel(Regime.SecondExistence, reason="eta_crit <= eta < mu_N + 4", **common)
    return RegimeLabel(Regime.EtaOutsideScope, reason="eta >= mu_N + 4", **common)
