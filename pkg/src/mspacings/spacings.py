"""Non-overlapping m-spacings of a uniform sample and their empirical processes.

Conventions: a sample of size parameter n consists of n - 1 interior uniform
order statistics with 0 and 1 adjoined, so there are N = floor(n / m) spacings
and the last one absorbs the tail up to 1.  The empirical process alpha is the
sqrt(N)-scaled deviation of the empirical cdf of the normalized spacings
m*N*D from the order-m gamma cdf; the quantile process gamma is its
density-weighted quantile-side counterpart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gamma import GammaKernel
from .process import ProcessPath

__all__ = [
    "SortedUniformSample",
    "SpacingsSet",
    "OrderedSpacings",
    "compute_spacings",
    "alpha_process",
    "gamma_process",
]

_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SortedUniformSample:
    """Ordered points on [0, 1] with the endpoints 0 and 1 adjoined."""

    values: np.ndarray
    n: int

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if self.n < 1:
            raise ValueError("sample size parameter n must be >= 1")
        if values.ndim != 1 or values.size != self.n + 1:
            raise ValueError(f"expected n + 1 = {self.n + 1} points, got {values.size}")
        if values[0] != 0.0 or values[-1] != 1.0:
            raise ValueError("sample must start at 0 and end at 1")
        if np.any(np.diff(values) < 0.0):
            raise ValueError("sample points must be nondecreasing")

    @classmethod
    def from_interior(cls, points) -> "SortedUniformSample":
        """Build from the n - 1 interior points; endpoints are adjoined here."""
        interior = np.sort(np.asarray(points, dtype=float))
        if interior.size and (interior[0] < 0.0 or interior[-1] > 1.0):
            raise ValueError("interior points must lie in [0, 1]")
        values = np.concatenate(([0.0], interior, [1.0]))
        return cls(values=values, n=interior.size + 1)

    @classmethod
    def draw(cls, n: int, rng: np.random.Generator) -> "SortedUniformSample":
        """Sample n - 1 i.i.d. uniforms, sort, and adjoin the endpoints."""
        if n < 1:
            raise ValueError("sample size parameter n must be >= 1")
        interior = rng.random(n - 1)
        interior.sort()
        return cls(values=np.concatenate(([0.0], interior, [1.0])), n=n)


@dataclass(frozen=True, eq=False)
class SpacingsSet:
    """The N = floor(n/m) non-overlapping m-spacings of a sample."""

    m: int
    n: int
    spacings: np.ndarray

    def __post_init__(self) -> None:
        spac = np.asarray(self.spacings, dtype=float)
        object.__setattr__(self, "spacings", spac)
        if self.m < 1 or self.n < self.m:
            raise ValueError("need n >= m >= 1")
        if spac.size != self.count:
            raise ValueError(f"expected {self.count} spacings, got {spac.size}")
        if np.any(spac < 0.0):
            raise ValueError("spacings must be nonnegative")
        if abs(float(spac.sum()) - 1.0) > _SUM_TOLERANCE:
            raise ValueError("spacings must sum to 1")

    @property
    def count(self) -> int:
        """Number of spacings N = floor(n / m)."""
        return self.n // self.m

    def normalized(self) -> np.ndarray:
        """The rescaled spacings m * N * D whose law tends to Gamma(m, 1)."""
        return self.m * self.count * self.spacings

    def empirical_cdf(self, x):
        """Right-continuous empirical cdf of the normalized spacings at x."""
        xs = np.asarray(x, dtype=float)
        scalar = xs.ndim == 0
        sorted_norm = np.sort(self.normalized())
        counts = np.searchsorted(sorted_norm, np.atleast_1d(xs), side="right")
        out = counts / self.count
        return float(out[0]) if scalar else out

    def ordered(self) -> "OrderedSpacings":
        return OrderedSpacings(m=self.m, n=self.n, sorted_spacings=np.sort(self.spacings))


@dataclass(frozen=True, eq=False)
class OrderedSpacings:
    """Order statistics of the m-spacings, for the quantile-side process."""

    m: int
    n: int
    sorted_spacings: np.ndarray

    def __post_init__(self) -> None:
        spac = np.asarray(self.sorted_spacings, dtype=float)
        object.__setattr__(self, "sorted_spacings", spac)
        if np.any(np.diff(spac) < 0.0):
            raise ValueError("spacings must be sorted nondecreasing")
        if spac.size != self.count:
            raise ValueError(f"expected {self.count} spacings, got {spac.size}")

    @property
    def count(self) -> int:
        return self.n // self.m

    def quantile_function(self, t):
        """Left-continuous step function t -> m * N * D_(i) on ((i-1)/N, i/N]."""
        ts = np.asarray(t, dtype=float)
        scalar = ts.ndim == 0
        ts1 = np.atleast_1d(ts)
        if np.any(ts1 < 0.0) or np.any(ts1 > 1.0):
            raise ValueError("quantile function requires t in [0, 1]")
        idx = cell_index(ts1, self.count)
        norm = self.m * self.count * self.sorted_spacings
        out = np.where(idx == 0, 0.0, norm[np.maximum(idx, 1) - 1])
        return float(out[0]) if scalar else out


def cell_index(t: np.ndarray, count: int) -> np.ndarray:
    """Index i with (i-1)/N < t <= i/N, and 0 at t = 0.

    Products t * N that sit within 1e-9 of an integer are snapped to it, so
    grid points expressed as i/N do not fall into the next cell through
    floating-point fuzz.
    """
    scaled = np.asarray(t, dtype=float) * count
    nearest = np.rint(scaled)
    snapped = np.where(np.abs(scaled - nearest) < 1e-9, nearest, np.ceil(scaled))
    return snapped.astype(int)


def compute_spacings(sample: SortedUniformSample, m: int) -> SpacingsSet:
    """Extract the N = floor(n/m) non-overlapping m-spacings.

    The first N - 1 spacings are gaps between order statistics m apart; the
    last one runs to the endpoint 1, absorbing the remainder when m does not
    divide n.
    """
    if m < 1:
        raise ValueError("spacings order m must be >= 1")
    if sample.n < m:
        raise ValueError(f"no m-spacing defined for n={sample.n} < m={m}")
    n_count = sample.n // m
    anchors = sample.values[: (n_count - 1) * m + 1 : m] if n_count > 1 else sample.values[:1]
    gaps = np.diff(anchors)
    last = 1.0 - sample.values[(n_count - 1) * m]
    spac = np.concatenate((gaps, [last]))
    return SpacingsSet(m=m, n=sample.n, spacings=spac)


def alpha_process(spacings: SpacingsSet, grid: np.ndarray, kernel: GammaKernel) -> ProcessPath:
    """Empirical spacings process sqrt(N) * (ecdf - F) on the given x-grid."""
    if kernel.m != spacings.m:
        raise ValueError(f"kernel order {kernel.m} does not match spacings order {spacings.m}")
    grid = np.asarray(grid, dtype=float)
    values = np.sqrt(spacings.count) * (spacings.empirical_cdf(grid) - kernel.cdf(grid))
    return ProcessPath(grid=grid, values=values, kind="alpha", m=spacings.m, n=spacings.n, count=spacings.count)


def gamma_process(ordered: OrderedSpacings, grid: np.ndarray, kernel: GammaKernel) -> ProcessPath:
    """Quantile spacings process sqrt(N) * f(Q(t)) * (Q(t) - Qhat(t)) on a t-grid."""
    if kernel.m != ordered.m:
        raise ValueError(f"kernel order {kernel.m} does not match spacings order {ordered.m}")
    grid = np.asarray(grid, dtype=float)
    if np.any(grid >= 1.0):
        raise ValueError("gamma process grid must stay below 1")
    q = kernel.quantile(grid)
    values = np.sqrt(ordered.count) * kernel.pdf(q) * (q - ordered.quantile_function(grid))
    return ProcessPath(grid=grid, values=values, kind="gamma", m=ordered.m, n=ordered.n, count=ordered.count)
