"""Explicit stationary solutions for the supercritical range.

For admissible q the profile V_q satisfies the Navier conditions at r = 1 and
L_mu V_q = +-P(-q) r^(-q-4) with the sign making the right side positive.
Scaling u = eps V_q and choosing eps below a threshold eps0 makes the source
f = L_mu u - r^sigma |u|^p strictly positive, with decay r^(-q-4).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .barrier.closedform import RadialClosedForm, Term
from .errors import CertificateFailed, InvalidParams, NoAdmissibleQ, QOutOfRange, SupFailure
from .spectral import Params, SpectralData, eval_M, eval_P

R0_CLASS = 100.0
R_MAX = 1e8
N_SAMPLES = 10_000
T_SEARCH_MAX = 1e4


class StationaryRegime(str, enum.Enum):
    Subcritical = "Subcritical"
    CriticalMu = "CriticalMu"


def _regime(spec: SpectralData) -> StationaryRegime:
    return StationaryRegime.CriticalMu if spec.degenerate else StationaryRegime.Subcritical


def admissible_q_interval(spec: SpectralData, params: Params, eta: float | None = None) -> tuple[float, float]:
    """Open interval of q for which V_q yields a positive source."""
    params.validate()
    if (params.N, params.mu) != (spec.N, spec.mu):
        raise InvalidParams("params and spectral data disagree on (N, mu)")
    lo = (params.sigma + 4.0) / (params.p - 1.0)
    if spec.degenerate:
        hi = -spec.alpha_minus
    else:
        lo = max(lo, -spec.alpha_plus)
        hi = spec.mu_N
    if eta is not None:
        if not eta < spec.mu_N + 4.0:
            raise NoAdmissibleQ(f"eta={eta!r} is not below mu_N + 4 = {spec.mu_N + 4.0!r}")
        lo = max(lo, eta - 4.0)
    if not lo < hi:
        raise NoAdmissibleQ(f"empty q interval ({lo!r}, {hi!r}); p must exceed p_crit")
    return lo, hi


def default_q(spec: SpectralData, params: Params, eta: float | None = None) -> float:
    lo, hi = admissible_q_interval(spec, params, eta)
    return 0.5 * (lo + hi)


def _check_q(spec: SpectralData, q: float, interval=None):
    if interval is not None:
        lo, hi = interval
        if not lo < q < hi:
            raise QOutOfRange(f"q={q!r} outside ({lo!r}, {hi!r})")
        return
    # without params only the root-based bounds can be checked
    if spec.degenerate:
        ok = spec.alpha_minus < -q < 0
    else:
        ok = spec.alpha_minus < -q < spec.alpha_plus
    if not ok:
        raise QOutOfRange(f"q={q!r} violates the root ordering needed for a sign-definite P(-q)")


def build_Vq(spec: SpectralData, q: float, interval=None) -> RadialClosedForm:
    _check_q(spec, q, interval)
    N = spec.N
    if spec.degenerate:
        al = spec.alpha_minus
        B = (eval_M(-q, N) - eval_M(al, N)) / 2.0
        return RadialClosedForm([Term(-1.0, -q), Term(1.0, al), Term(B, al, 1)])
    am, bm = spec.alpha_minus, spec.beta_minus
    den = eval_M(am, N) - eval_M(bm, N)
    A = (eval_M(bm, N) - eval_M(-q, N)) / den
    B = (eval_M(-q, N) - eval_M(am, N)) / den
    return RadialClosedForm([Term(1.0, -q), Term(A, am), Term(B, bm)])


def _q_of(V: RadialClosedForm) -> float:
    # build_Vq always puts the r^(-q) term first
    return -V.terms[0].lam


@dataclass(frozen=True)
class SupResult:
    sup: float
    r_argmax: float
    grid_sup: float
    n_grid: int
    tail_exponent: float


def _log_g(V: RadialClosedForm, sigma: float, q: float, p: float, t):
    lv, _ = V.log_abs(t)
    return (sigma + q + 4.0) * np.asarray(t, dtype=float) + p * lv


def sup_g(spec: SpectralData, params: Params, V: RadialClosedForm, q: float | None = None, n_grid: int = N_SAMPLES,
          r_max: float = R_MAX) -> SupResult:
    """sup over r >= 1 of r^(sigma+q+4) |V_q(r)|^p.

    Grid bracketing in ln r followed by golden-section refinement; the tail
    beyond r_max decays like r^(sigma + 4 - q(p-1)).
    """
    if q is None:
        q = _q_of(V)
    tail = params.sigma + 4.0 - q * (params.p - 1.0)
    if not tail < 0:
        raise SupFailure(f"r^(sigma+4-q(p-1)) does not decay (exponent {tail!r}); need q > (sigma+4)/(p-1)")
    # the bracket may lie beyond r_max when log factors delay the decay; widen in ln r
    t_end = math.log(r_max)
    while True:
        t = np.linspace(0.0, t_end, n_grid)
        lg = _log_g(V, params.sigma, q, params.p, t)
        k = int(np.argmax(lg))
        if not math.isfinite(lg[k]):
            raise SupFailure("g is not finite on the search grid")
        if k < n_grid - 1:
            break
        t_end *= 2.0
        if t_end > T_SEARCH_MAX:
            raise SupFailure(f"no interior maximum of g up to ln r = {T_SEARCH_MAX}")
    f = lambda x: -float(_log_g(V, params.sigma, q, params.p, np.array([x]))[0])  # noqa: E731
    lo, hi = t[max(k - 1, 0)], t[k + 1]
    res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    best = max(-res.fun, float(lg[k]))
    t_best = res.x if -res.fun >= lg[k] else t[k]
    return SupResult(math.exp(best), math.exp(t_best), math.exp(float(lg[k])), n_grid, tail)


def epsilon0(spec: SpectralData, params: Params, V: RadialClosedForm, q: float | None = None, n_grid: int = N_SAMPLES) -> float:
    if q is None:
        q = _q_of(V)
    s = sup_g(spec, params, V, q, n_grid)
    return (abs(eval_P(-q, spec.N, spec.mu)) / s.sup) ** (1.0 / (params.p - 1.0))


class SourceEvaluator:
    """f(r) = eps r^(-q-4) [|P(-q)| - eps^(p-1) r^(sigma+q+4) |V_q|^p].

    Algebraically equal to L_mu u - r^sigma |u|^p; the factored form avoids
    the cancellation that the difference suffers at large r.
    """

    def __init__(self, V: RadialClosedForm, q: float, eps: float, P_abs: float, sigma: float, p: float):
        self.V, self.q, self.eps, self.P_abs, self.sigma, self.p = V, q, eps, P_abs, sigma, p

    def margin(self, r):
        """Bracketed factor divided by |P(-q)|; positive iff f > 0."""
        t = np.log(np.asarray(r, dtype=float))
        g = np.exp(_log_g(self.V, self.sigma, self.q, self.p, t))
        return 1.0 - self.eps ** (self.p - 1.0) * g / self.P_abs

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.eps * self.P_abs * r ** (-self.q - 4.0) * self.margin(r)

    def direct(self, r, N: int, mu: float):
        """The defining difference, for residual checks at moderate r."""
        r = np.asarray(r, dtype=float)
        u = self.V.scale(self.eps)
        return u.hardy_rellich(N, mu)(r) - r**self.sigma * np.abs(u(r)) ** self.p


@dataclass
class StationaryPair:
    q: float
    eps: float
    eps0: float
    V_q: RadialClosedForm
    u_eps: RadialClosedForm
    f_eps: SourceEvaluator
    regime: StationaryRegime
    P_minus_q: float
    sup: SupResult
    eta_class: float | None = None
    certificate: dict = field(default_factory=dict)


def build_pair(spec: SpectralData, params: Params, q: float | None = None, eps: float | None = None,
               eta: float | None = None, n_samples: int = N_SAMPLES, r_max: float = R_MAX) -> StationaryPair:
    interval = admissible_q_interval(spec, params, eta)
    if q is None:
        q = 0.5 * sum(interval)
    V = build_Vq(spec, q, interval)
    sup = sup_g(spec, params, V, q)
    Pq = eval_P(-q, spec.N, spec.mu)
    P_abs = abs(Pq)
    e0 = (P_abs / sup.sup) ** (1.0 / (params.p - 1.0))
    if eps is None:
        eps = e0 / 2.0
    if not 0 < eps < e0:
        raise InvalidParams(f"eps={eps!r} must lie in (0, eps0={e0!r})")
    f = SourceEvaluator(V, q, eps, P_abs, params.sigma, params.p)
    r = np.geomspace(1.0, r_max, n_samples)
    m = f.margin(r)
    k = int(np.argmin(m))
    if not m[k] > 0:
        raise CertificateFailed(f"f_eps <= 0 at r={r[k]!r}", witness=float(r[k]))
    cert = {
        "q": q,
        "q_interval": list(interval),
        "eps": eps,
        "eps0": e0,
        "P_minus_q": Pq,
        "sup_g": sup.sup,
        "r_argmax": sup.r_argmax,
        "margin_at_sup": 1.0 - eps ** (params.p - 1.0) * sup.sup / P_abs,
        "grid": {"r_min": 1.0, "r_max": r_max, "n": n_samples, "spacing": "log"},
        "worst_positivity_margin": float(m[k]),
        "worst_positivity_r": float(r[k]),
        "regime": _regime(spec).value,
        "V_q_at_1": float(V(np.array(1.0))),
        "lap_V_q_at_1": float(V.laplacian(spec.N)(np.array(1.0))),
    }
    if eta is not None:
        # f r^eta / (eps |P(-q)|) must stay <= 1 on r >= 1
        ratio = r ** (eta - q - 4.0) * m
        j = int(np.argmax(ratio))
        if ratio[j] > 1.0 + 1e-12:
            raise CertificateFailed(f"decay bound fails at r={r[j]!r}", witness=float(r[j]))
        cert["eta"] = eta
        cert["worst_decay_ratio"] = float(ratio[j])
        cert["R0"] = R0_CLASS
        cert["decay_case"] = "P(-q) > 0" if Pq > 0 else "-P(-q) > 0"
    return StationaryPair(q, eps, e0, V, V.scale(eps), f, _regime(spec), Pq, sup, eta, cert)


class Direction(str, enum.Enum):
    Upper = "Upper"
    Lower = "Lower"


@dataclass(frozen=True)
class SourceClassResult:
    ok: bool
    c: float
    witness: float | None = None

    def __bool__(self):
        return self.ok


def verify_source_class(f, eta: float, direction="Upper", R0: float = R0_CLASS, r_max: float = R_MAX,
                        n_samples: int = N_SAMPLES, rtol: float = 1e-9) -> SourceClassResult:
    """Check f <= c r^-eta (Upper) or f >= c r^-eta (Lower) for large r.

    c is fitted on the first decade [R0, 10 R0] and the bound is confirmed
    on all of [R0, r_max], so a ratio drifting to 0 (Lower) or infinity
    (Upper) is caught.
    """
    direction = Direction(direction)
    r = np.geomspace(R0, r_max, n_samples)
    v = np.asarray(f(r), dtype=float) * r**eta
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        k = int(np.argmin(np.where(np.isfinite(v), v, -np.inf)))
        return SourceClassResult(False, float("nan"), float(r[k]))
    fit = r <= 10.0 * R0
    if direction is Direction.Upper:
        c = float(v[fit].max())
        bad = v > c * (1.0 + rtol)
    else:
        c = float(v[fit].min())
        bad = v < c * (1.0 - rtol)
    if np.any(bad):
        return SourceClassResult(False, c, float(r[np.argmax(bad)]))
    return SourceClassResult(True, c)
