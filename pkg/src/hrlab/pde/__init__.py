"""Radial finite-difference solver for u_t + L_mu u = r^sigma |u|^p + f on r > 1."""
from .backend import BACKEND
from .grid import RadialGrid, build_grid
from .operator import BandedOperator, BoundaryData, assemble, consistency_residual
from .simulate import Outcome, SimConfig, SimOutcome, SimState, Stepper, imex_step, simulate
from .sweep import CSV_HEADER, SweepConfig, SweepRow, bump_source, power_source, sweep

__all__ = [
    "BACKEND",
    "BandedOperator",
    "BoundaryData",
    "CSV_HEADER",
    "Outcome",
    "RadialGrid",
    "SimConfig",
    "SimOutcome",
    "SimState",
    "Stepper",
    "SweepConfig",
    "SweepRow",
    "assemble",
    "build_grid",
    "bump_source",
    "consistency_residual",
    "imex_step",
    "power_source",
    "simulate",
    "sweep",
]
