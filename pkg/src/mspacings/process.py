"""Grid-sampled process paths and the shared CSV/JSON serialization.

A ProcessPath is the common carrier for every function-on-grid object in the
package: empirical and quantile spacings processes, their block-sum analogues,
the uniformized quantile process, Brownian bridges, and the simulated limit
processes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .gamma import GammaKernel

__all__ = ["ProcessPath", "PATH_KINDS", "x_grid", "t_grid", "DEFAULT_RESOLUTION", "DEFAULT_DOMAIN_FRACTION"]

PATH_KINDS = (
    "alpha",
    "gamma",
    "beta",
    "kappa",
    "uniform_quantile",
    "bridge",
    "limit_W",
    "limit_V",
)

DEFAULT_RESOLUTION = 512
DEFAULT_DOMAIN_FRACTION = 0.9

# t-grids stop short of 1 since the gamma quantile diverges there.
T_GRID_CEILING = 1.0 - 1e-6


@dataclass(frozen=True, eq=False)
class ProcessPath:
    """Values of a process on a strictly increasing grid.

    ``kind`` tags which process the values belong to; ``m``, ``n`` and
    ``count`` (the number N of spacings or blocks) are carried as metadata
    where they apply.
    """

    grid: np.ndarray
    values: np.ndarray
    kind: str
    m: int | None = None
    n: int | None = None
    count: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if self.kind not in PATH_KINDS:
            raise ValueError(f"unknown path kind {self.kind!r}")
        if grid.ndim != 1 or values.shape != grid.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if grid.size >= 2 and not np.all(np.diff(grid) > 0.0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("path values must be finite")

    def __len__(self) -> int:
        return int(self.grid.size)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "n": self.n,
            "N": self.count,
            "grid": [float(g) for g in self.grid],
            "values": [float(v) for v in self.values],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        lines = ["grid,value"]
        lines.extend(f"{float(g)!r},{float(v)!r}" for g, v in zip(self.grid, self.values))
        return "\n".join(lines) + "\n"


def x_grid(kernel: GammaKernel, a: float = DEFAULT_DOMAIN_FRACTION, resolution: int = DEFAULT_RESOLUTION) -> np.ndarray:
    """Equispaced abscissae on [0, Q(a)] for x-domain (empirical side) processes."""
    if not 0.0 < a <= 1.0:
        raise ValueError("domain fraction a must be in (0, 1]")
    upper = kernel.quantile(min(a, T_GRID_CEILING))
    return np.linspace(0.0, upper, resolution)


def t_grid(a: float = DEFAULT_DOMAIN_FRACTION, resolution: int = DEFAULT_RESOLUTION) -> np.ndarray:
    """Equispaced abscissae on [0, min(a, 1 - 1e-6)] for t-domain (quantile side)."""
    if not 0.0 < a <= 1.0:
        raise ValueError("domain fraction a must be in (0, 1]")
    return np.linspace(0.0, min(a, T_GRID_CEILING), resolution)
