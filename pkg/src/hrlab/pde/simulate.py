"""Implicit-explicit time stepping and blow-up / steady-state detection.

Each step solves (I + dt L_h) u^{n+1} = u^n + dt (r^sigma |u^n|^p + f) with the
boundary data moved to the right side.  The step size starts at
min(0.25 h^2, 1e-3), is halved whenever the explicit growth dt * max r^sigma |u|^(p-1)
exceeds 10%, and grows by 1.25 while it stays below 1%.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import StepError
from ..spectral import Params, SpectralData
from .backend import BACKEND, PentaLU, imex_step_kernel
from .grid import RadialGrid
from .operator import BandedOperator, BoundaryData, assemble


class Outcome(str, enum.Enum):
    BlewUp = "BlewUp"
    Bounded = "Bounded"
    SteadyState = "SteadyState"


@dataclass(frozen=True)
class SimConfig:
    T_max: float = 50.0
    blow_threshold: float = 1e12
    dt0: float | None = None
    dt_max: float = 1e-2
    grow: float = 1.25
    grow_below: float = 0.01
    halve_above: float = 0.10
    steady_tol: float = 1e-8
    n_history: int = 1000
    refine_blowup: bool = True
    refine_rtol: float = 0.01
    max_steps: int = 5_000_000

    def initial_dt(self, grid: RadialGrid) -> float:
        if self.dt0 is not None:
            return self.dt0
        return min(0.25 * grid.h_log**2, 1e-3)

    def scaled(self, factor: float, grid: RadialGrid) -> "SimConfig":
        """Same run with every step-size parameter multiplied by ``factor``."""
        return replace(self, dt0=self.initial_dt(grid) * factor, dt_max=self.dt_max * factor,
                       grow_below=self.grow_below * factor, halve_above=self.halve_above * factor)


@dataclass
class SimState:
    t: float
    u: np.ndarray
    dt: float
    history: list = field(default_factory=list)
    steps: int = 0


@dataclass
class SimOutcome:
    outcome: Outcome
    t_final: float
    norm: float
    steps: int
    history: list
    t_star: float | None = None
    t_star_coarse: float | None = None
    t_star_bracket: tuple | None = None
    steady_residual: float | None = None
    distance: float | None = None
    backend: str = BACKEND

    def as_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "t_final": self.t_final,
            "norm": self.norm,
            "steps": self.steps,
            "t_star": self.t_star,
            "t_star_coarse": self.t_star_coarse,
            "t_star_bracket": list(self.t_star_bracket) if self.t_star_bracket else None,
            "steady_residual": self.steady_residual,
            "distance": self.distance,
            "backend": self.backend,
            "history_len": len(self.history),
        }


class Stepper:
    """Owns the per-run arrays and a cache of factorizations keyed by dt."""

    def __init__(self, op: BandedOperator, params: Params, f: np.ndarray | None = None, bc: BoundaryData | None = None):
        self.op = op
        self.params = params
        r = op.grid.interior
        self.rsig = np.ascontiguousarray(r**params.sigma)
        n = op.n
        self.f = np.zeros(n) if f is None else np.ascontiguousarray(f, dtype=np.float64)
        if self.f.shape != (n,):
            raise ValueError(f"source must have {n} interior values")
        self.bc = bc or BoundaryData()
        self.bsrc = np.ascontiguousarray(op.boundary_source(self.bc))
        self._bands = op.bands()
        self._lu: dict[float, object] = {}

    def factor(self, dt: float):
        lu = self._lu.get(dt)
        if lu is None:
            if len(self._lu) > 64:
                self._lu.clear()
            A = dt * self._bands
            A[2] += 1.0
            try:
                lu = PentaLU(A)
            except (ZeroDivisionError, ValueError) as exc:
                raise StepError(f"implicit system not factorable at dt={dt!r}: {exc}") from exc
            self._lu[dt] = lu
        return lu

    def step(self, u: np.ndarray, out: np.ndarray, dt: float):
        return imex_step_kernel(self.factor(dt), u, out, dt, self.rsig, self.params.p, self.f, self.bsrc)

    def full(self, u: np.ndarray) -> np.ndarray:
        return np.concatenate(([self.bc.u_inner], u, [self.bc.u_outer]))

    def weighted_mass(self, u: np.ndarray) -> float:
        """int_{1<|x|<R_max} |x|^sigma |u|^p dx by the trapezoid rule in ln r."""
        g = self.op.grid
        uf = np.abs(self.full(u))
        N = self.op.N
        dens = g.r ** (self.params.sigma + N) * uf**self.params.p
        area = 2.0 * math.pi ** (N / 2.0) / math.gamma(N / 2.0)
        return float(area * np.trapezoid(dens, dx=g.h_log))


def imex_step(state: SimState, op: BandedOperator, params: Params, f=None, bc: BoundaryData | None = None,
              stepper: Stepper | None = None) -> SimState:
    """One step of size state.dt; returns the new state."""
    st = stepper or Stepper(op, params, f, bc)
    if not state.dt > 0:
        raise StepError(f"dt must be positive, got {state.dt!r}")
    out = np.empty_like(state.u)
    st.step(np.ascontiguousarray(state.u, dtype=np.float64), out, state.dt)
    return SimState(state.t + state.dt, out, state.dt, state.history, state.steps + 1)


def _crossing_time(t0, n0, t1, n1, thr):
    # log-linear interpolation of the norm between the last two accepted steps
    if not (math.isfinite(n1) and n0 > 0 and n1 > n0):
        return t1
    s = (math.log(thr) - math.log(n0)) / (math.log(n1) - math.log(n0))
    return t0 + min(max(s, 0.0), 1.0) * (t1 - t0)


def _run(st: Stepper, u0: np.ndarray, t0: float, cfg: SimConfig, reference=None, stop_at_blowup=True):
    grid = st.op.grid
    u = np.array(u0, dtype=np.float64, copy=True)
    out = np.empty_like(u)
    t = t0
    dt = cfg.initial_dt(grid)
    thr = cfg.blow_threshold
    norm = float(np.max(np.abs(u))) if u.size else 0.0
    hist = [(t, norm, st.weighted_mass(u))]
    h_every = cfg.T_max / cfg.n_history
    next_h = t + h_every
    ckpts: list = []
    steps = 0
    while t < cfg.T_max:
        if steps >= cfg.max_steps:
            raise StepError(f"step budget {cfg.max_steps} exhausted at t={t!r}")
        dt_eff = min(dt, cfg.T_max - t)
        new_norm, growth = st.step(u, out, dt_eff)
        if math.isfinite(growth) and dt_eff * growth > cfg.halve_above and dt_eff > 0:
            dt = dt_eff / 2.0
            if dt == 0.0:
                raise StepError("step size underflow")
            continue
        steps += 1
        t_new = t + dt_eff
        blown = not math.isfinite(new_norm) or new_norm > thr or not math.isfinite(growth)
        if blown:
            return dict(kind=Outcome.BlewUp, t=t, t_new=t_new, norm=norm, new_norm=new_norm, u=u.copy(),
                        hist=hist, steps=steps, ckpts=ckpts)
        with np.errstate(invalid="ignore", divide="ignore"):
            change = float(np.max(np.abs(out - u))) / (dt_eff * max(new_norm, 1e-300))
        ckpts.append((t, u.copy(), dt))
        if len(ckpts) > 64:
            ckpts.pop(0)
        u, out = out, u
        t, norm = t_new, new_norm
        if t >= next_h or t >= cfg.T_max:
            hist.append((t, norm, st.weighted_mass(u)))
            next_h += h_every
        if change < cfg.steady_tol:
            if hist[-1][0] != t:
                hist.append((t, norm, st.weighted_mass(u)))
            return dict(kind=Outcome.SteadyState, t=t, norm=norm, u=u, hist=hist, steps=steps, residual=change)
        if dt_eff * growth < cfg.grow_below:
            dt = min(dt_eff * cfg.grow, cfg.dt_max)
        else:
            dt = dt_eff
    return dict(kind=Outcome.Bounded, t=t, norm=norm, u=u, hist=hist, steps=steps)


def simulate(params: Params, spec: SpectralData | None, grid: RadialGrid, f=None, u0=None, T_max: float | None = None,
             blow_threshold: float | None = None, config: SimConfig | None = None, bc: BoundaryData | None = None,
             reference=None, op: BandedOperator | None = None) -> SimOutcome:
    """Evolve u_t = -L_mu u + r^sigma |u|^p + f from u0 (zero by default).

    ``f`` and ``u0`` are callables of r or arrays on the interior nodes.
    ``reference`` is an optional closed form; the outcome then carries the
    relative sup distance to it.
    """
    cfg = config or SimConfig()
    if T_max is not None:
        cfg = replace(cfg, T_max=T_max)
    if blow_threshold is not None:
        cfg = replace(cfg, blow_threshold=blow_threshold)
    if spec is not None and (spec.N, spec.mu) != (params.N, params.mu):
        raise ValueError("spectral data and params disagree on (N, mu)")
    op = op or assemble(grid, params.N, params.mu)
    r = grid.interior
    fv = None if f is None else (np.asarray(f(r), dtype=np.float64) if callable(f) else np.asarray(f, dtype=np.float64))
    uv = np.zeros(op.n) if u0 is None else (np.asarray(u0(r), dtype=np.float64) if callable(u0) else np.asarray(u0, dtype=np.float64))
    st = Stepper(op, params, fv, bc)
    res = _run(st, uv, 0.0, cfg)

    if res["kind"] is Outcome.BlewUp:
        thr = cfg.blow_threshold
        coarse = _crossing_time(res["t"], res["norm"], res["t_new"], res["new_norm"], thr)
        t_star, bracket = coarse, (res["t"], res["t_new"])
        if cfg.refine_blowup and res["ckpts"]:
            t_star, bracket = _refine_blowup(st, res["ckpts"][0], cfg, coarse)
        return SimOutcome(Outcome.BlewUp, res["t"], res["norm"], res["steps"], res["hist"],
                          t_star=t_star, t_star_coarse=coarse, t_star_bracket=bracket)

    out = SimOutcome(res["kind"], res["t"], res["norm"], res["steps"], res["hist"],
                     steady_residual=res.get("residual"))
    if reference is not None:
        ref = reference(r)
        out.distance = float(np.max(np.abs(res["u"] - ref)) / np.max(np.abs(ref)))
    return out


def _refine_blowup(st: Stepper, ckpt, cfg: SimConfig, coarse: float, max_rounds: int = 4):
    """Re-run the last window with a 4x finer step schedule until the bracket is within rtol."""
    t0, u0, dt0 = ckpt
    t_star = coarse
    bracket = None
    fine = cfg
    for _ in range(max_rounds):
        fine = replace(fine, dt0=dt0 / 4.0, dt_max=fine.dt_max / 4.0, grow_below=fine.grow_below / 4.0,
                       halve_above=fine.halve_above / 4.0, n_history=10)
        dt0 = dt0 / 4.0
        res = _run(st, u0, t0, fine)
        if res["kind"] is not Outcome.BlewUp:
            break
        t_star = _crossing_time(res["t"], res["norm"], res["t_new"], res["new_norm"], cfg.blow_threshold)
        bracket = (res["t"], res["t_new"])
        if (bracket[1] - bracket[0]) <= cfg.refine_rtol * t_star:
            break
    return t_star, bracket
