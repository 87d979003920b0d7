"""Parameter scans producing one simulation per value."""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ..barrier.cutoffs import bump_derivs
from ..errors import HRLabError
from ..spectral import Params, Regime, classify_regime, compute_spectral
from .grid import build_grid
from .simulate import SimConfig, simulate

AXES = ("p", "eta", "mu")
CSV_HEADER = ("value", "label", "outcome", "t_star", "final_norm", "steady_residual", "runtime_ms")


def bump_source(amplitude: float, r_lo: float = 2.0, r_hi: float = 4.0):
    """Smooth bump with peak ``amplitude`` supported on (r_lo, r_hi)."""
    width = r_hi - r_lo
    scale = amplitude * math.exp(4.0)

    def f(r):
        return scale * bump_derivs((np.asarray(r, dtype=float) - r_lo) / width)[0]

    return f


def power_source(amplitude: float, eta: float):
    def f(r):
        return amplitude * np.asarray(r, dtype=float) ** (-eta)

    return f


@dataclass(frozen=True)
class SweepConfig:
    R_max: float = 100.0
    M: int = 1000
    sim: SimConfig = field(default_factory=SimConfig)
    source: str = "bump"
    amplitude: float = 0.3
    timing: bool = False

    def source_for(self, params: Params, axis: str):
        kind = "power" if (self.source == "auto" and axis == "eta") else self.source
        if kind == "auto":
            kind = "bump"
        if kind == "bump":
            return bump_source(self.amplitude)
        if kind == "power":
            if params.eta is None:
                raise ValueError("power source needs eta")
            return power_source(self.amplitude, params.eta)
        raise ValueError(f"unknown source {self.source!r}")


@dataclass
class SweepRow:
    value: float
    label: str
    outcome: str
    t_star: float | None = None
    final_norm: float | None = None
    steady_residual: float | None = None
    runtime_ms: float | None = None
    error: str | None = None

    def as_tuple(self):
        return (self.value, self.label, self.outcome, self.t_star, self.final_norm, self.steady_residual, self.runtime_ms)


def _with_value(base: Params, axis: str, value: float) -> Params:
    if axis == "p":
        return replace(base, p=value)
    if axis == "eta":
        return replace(base, eta=value)
    return replace(base, mu=value)


def _run_one(base: Params, axis: str, value: float, cfg: SweepConfig) -> SweepRow:
    params = _with_value(base, axis, value)
    label = classify_regime(params)
    if label.label is Regime.InvalidParams:
        return SweepRow(value, label.label.value, "Skipped", error=label.reason)
    t0 = time.perf_counter()
    try:
        spec = compute_spectral(params.N, params.mu)
        grid = build_grid(cfg.R_max, cfg.M)
        out = simulate(params, spec, grid, f=cfg.source_for(params, axis), config=cfg.sim)
    except (HRLabError, ValueError) as exc:
        return SweepRow(value, label.label.value, "Error", error=str(exc))
    ms = (time.perf_counter() - t0) * 1e3 if cfg.timing else None
    return SweepRow(value, label.label.value, out.outcome.value, out.t_star, out.norm, out.steady_residual, ms)


def max_threads() -> int:
    env = os.environ.get("HR_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def sweep(base: Params, axis: str, values, config: SweepConfig | None = None) -> list[SweepRow]:
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    values = [float(v) for v in values]
    if values != sorted(values):
        raise ValueError("sweep values must be sorted")
    if not values:
        return []
    cfg = config or SweepConfig()
    workers = min(max_threads(), len(values))
    if workers == 1:
        return [_run_one(base, axis, v, cfg) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda v: _run_one(base, axis, v, cfg), values))
