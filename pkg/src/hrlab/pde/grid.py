from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidGrid

MIN_NODES = 200
MIN_RMAX = 20.0


@dataclass(frozen=True)
class RadialGrid:
    """Log-uniform nodes r_i = exp(i h), i = 0..M, so r_0 = 1 and r_M = R_max."""

    R_max: float
    M: int
    r: np.ndarray = field(repr=False, compare=False)

    @property
    def h_log(self) -> float:
        return math.log(self.R_max) / self.M

    @property
    def interior(self) -> np.ndarray:
        return self.r[1:-1]

    @property
    def n_interior(self) -> int:
        return self.M - 1

    def refine(self) -> "RadialGrid":
        return build_grid(self.R_max, 2 * self.M)


def build_grid(R_max: float, M: int) -> RadialGrid:
    if int(M) != M or M < MIN_NODES:
        raise InvalidGrid(f"M must be an integer >= {MIN_NODES}, got {M!r}")
    if not (math.isfinite(R_max) and R_max >= MIN_RMAX):
        raise InvalidGrid(f"R_max must be >= {MIN_RMAX}, got {R_max!r}")
    M = int(M)
    h = math.log(R_max) / M
    r = np.exp(h * np.arange(M + 1))
    r[0] = 1.0
    r[-1] = float(R_max)
    return RadialGrid(float(R_max), M, r)
