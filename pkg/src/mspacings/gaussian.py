"""Brownian bridges and the Gaussian limits of the spacings processes.

The quantile-side limit W*(t) = B(t) - phi(t)/m * I and the empirical-side
limit V*(x) = B(F(x)) - x f(x)/m * I are both built from one Brownian bridge
B, where I is the integral of B(F(s)) over the positive half-line (truncated
where the gamma tail is negligible).  Bridges are simulated exactly in
distribution at grid points: Wiener increments of variance dt, then subtract
t * W(1).  Closed-form limit covariances live here too, next to the quadrature
identities that tie them to the construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gamma import GammaKernel
from .numerics import composite_simpson, cumulative_trapezoid
from .process import ProcessPath

__all__ = [
    "BridgePath",
    "LimitProcessSpec",
    "simulate_bridge",
    "bridge_integral",
    "limit_W",
    "limit_V",
    "covariance_W",
    "covariance_V",
    "LimitProcessSampler",
    "quadrature_grid",
    "integrated_bridge_covariance",
    "sigma1_squared_quadrature",
    "normal_sf",
    "increment_exceedance",
]

TRUNCATION_SF = 1e-8
GRID_MATCH_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class BridgePath:
    """One bridge sample on a grid.

    ``domain`` is "t" for paths indexed by probabilities in [0, 1] and "x"
    for paths indexed by gamma abscissae (values then hold B(F(s))).
    """

    grid: np.ndarray
    values: np.ndarray
    domain: str = "t"
    meta: dict | None = None

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if self.domain not in ("t", "x"):
            raise ValueError("domain must be 't' or 'x'")
        if grid.ndim != 1 or values.shape != grid.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if grid.size >= 2 and not np.all(np.diff(grid) > 0.0):
            raise ValueError("grid must be strictly increasing")
        if self.domain == "t" and (np.any(grid < 0.0) or np.any(grid > 1.0)):
            raise ValueError("t-domain bridge grid must lie in [0, 1]")
        if not np.all(np.isfinite(values)):
            raise ValueError("bridge values must be finite")

    def as_process_path(self) -> ProcessPath:
        return ProcessPath(grid=self.grid, values=self.values, kind="bridge")


@dataclass(frozen=True)
class LimitProcessSpec:
    """Configuration for assembling a limit process from a bridge."""

    kernel: GammaKernel
    side: str = "quantile"
    integral_truncation: float | None = None
    quadrature_resolution: int = 2048

    def __post_init__(self) -> None:
        if self.side not in ("quantile", "empirical"):
            raise ValueError("side must be 'quantile' or 'empirical'")
        if self.quadrature_resolution < 16:
            raise ValueError("quadrature_resolution must be at least 16")
        if self.integral_truncation is None:
            # aim at half the budget so the solver tolerance cannot push the
            # survival value back up to the threshold
            object.__setattr__(self, "integral_truncation", self.kernel.truncation_point(0.5 * TRUNCATION_SF))
        elif self.kernel.sf(self.integral_truncation) >= TRUNCATION_SF:
            raise ValueError(f"survival at the truncation point must stay below {TRUNCATION_SF}")


def quadrature_grid(spec: LimitProcessSpec) -> np.ndarray:
    """Equispaced x-domain abscissae for the bridge integral."""
    return np.linspace(0.0, spec.integral_truncation, spec.quadrature_resolution)


# -- bridge simulation -------------------------------------------------------


def _bridge_values(grid01: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Exact-in-distribution bridge at the given t-points in [0, 1]."""
    work = grid01
    lead = 0
    if work.size == 0 or work[0] > 0.0:
        work = np.concatenate(([0.0], work))
        lead = 1
    if work[-1] < 1.0:
        work = np.concatenate((work, [1.0]))
    increments = rng.standard_normal(work.size - 1) * np.sqrt(np.diff(work))
    wiener = np.concatenate(([0.0], np.cumsum(increments)))
    bridge = wiener - work * wiener[-1]
    return bridge[lead : lead + grid01.size]


def simulate_bridge(grid, rng: np.random.Generator) -> BridgePath:
    """Sample a Brownian bridge at the given strictly increasing t-points."""
    grid = np.asarray(grid, dtype=float)
    if np.any(grid < 0.0) or np.any(grid > 1.0):
        raise ValueError("bridge grid must lie in [0, 1]")
    if grid.size >= 2 and not np.all(np.diff(grid) > 0.0):
        raise ValueError("bridge grid must be strictly increasing")
    return BridgePath(grid=grid, values=_bridge_values(grid, rng), domain="t")


def bridge_integral(bridge: BridgePath, spec: LimitProcessSpec) -> float:
    """Trapezoid integral of s -> B(F(s)) over [0, truncation].

    Expects an x-domain bridge sampled on the quadrature grid of ``spec``.
    By integration by parts the same number serves as -integral of t dB(F(t)).
    """
    if bridge.domain != "x":
        raise ValueError("bridge_integral expects an x-domain bridge (values B(F(s)))")
    expected = quadrature_grid(spec)
    if bridge.grid.size != expected.size or np.max(np.abs(bridge.grid - expected)) > GRID_MATCH_TOLERANCE:
        raise ValueError("bridge is not sampled on the spec quadrature grid")
    return float(np.trapezoid(bridge.values, bridge.grid))


# -- limit processes ---------------------------------------------------------


def _phi_allowing_one(kernel: GammaKernel, t: np.ndarray) -> np.ndarray:
    # phi tends to 0 at t = 1; extend by that limit so t-grids may touch 1.
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    interior = t < 1.0
    if np.any(interior):
        out[interior] = kernel.phi(t[interior])
    return out


def _lookup(bridge: BridgePath, points: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(bridge.grid, points)
    idx = np.clip(idx, 0, bridge.grid.size - 1)
    left = np.clip(idx - 1, 0, bridge.grid.size - 1)
    use_left = np.abs(bridge.grid[left] - points) < np.abs(bridge.grid[idx] - points)
    idx = np.where(use_left, left, idx)
    if np.max(np.abs(bridge.grid[idx] - points)) > GRID_MATCH_TOLERANCE:
        raise ValueError("bridge was not sampled at all required grid points")
    return bridge.values[idx]


def limit_W(bridge: BridgePath, grid, spec: LimitProcessSpec) -> ProcessPath:
    """Quantile-side limit W*(t) = B(t) - phi(t)/m * integral of B(F).

    The bridge must be a t-domain path sampled at both the requested t-points
    and the F-images of the quadrature grid (one underlying path serves both).
    """
    grid = np.asarray(grid, dtype=float)
    kernel = spec.kernel
    b_t = _lookup(bridge, grid)
    s_points = kernel.cdf(quadrature_grid(spec))
    integral = float(np.trapezoid(_lookup(bridge, s_points), quadrature_grid(spec)))
    values = b_t - _phi_allowing_one(kernel, grid) / kernel.m * integral
    return ProcessPath(grid=grid, values=values, kind="limit_W", m=kernel.m)


def limit_V(bridge: BridgePath, grid, spec: LimitProcessSpec) -> ProcessPath:
    """Empirical-side limit V*(x) = B(F(x)) - x f(x)/m * integral of B(F)."""
    grid = np.asarray(grid, dtype=float)
    kernel = spec.kernel
    b_fx = _lookup(bridge, kernel.cdf(grid))
    s_points = kernel.cdf(quadrature_grid(spec))
    integral = float(np.trapezoid(_lookup(bridge, s_points), quadrature_grid(spec)))
    values = b_fx - grid * kernel.pdf(grid) / kernel.m * integral
    return ProcessPath(grid=grid, values=values, kind="limit_V", m=kernel.m)


# -- closed-form covariances -------------------------------------------------


def covariance_W(kernel: GammaKernel, t, s):
    """Cov of the quantile-side limit: min(t,s) - t s - phi(t) phi(s) / m."""
    t_arr = np.asarray(t, dtype=float)
    s_arr = np.asarray(s, dtype=float)
    scalar = t_arr.ndim == 0 and s_arr.ndim == 0
    t_arr, s_arr = np.broadcast_arrays(np.atleast_1d(t_arr), np.atleast_1d(s_arr))
    out = (
        np.minimum(t_arr, s_arr)
        - t_arr * s_arr
        - _phi_allowing_one(kernel, t_arr) * _phi_allowing_one(kernel, s_arr) / kernel.m
    )
    return float(out[0]) if scalar else out


def covariance_V(kernel: GammaKernel, x, y):
    """Cov of the empirical-side limit: F(x^y) - F(x)F(y) - x y f(x) f(y)/m."""
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    scalar = x_arr.ndim == 0 and y_arr.ndim == 0
    x_arr, y_arr = np.broadcast_arrays(np.atleast_1d(x_arr), np.atleast_1d(y_arr))
    fx, fy = kernel.cdf(x_arr), kernel.cdf(y_arr)
    out = np.minimum(fx, fy) - fx * fy - x_arr * y_arr * kernel.pdf(x_arr) * kernel.pdf(y_arr) / kernel.m
    return float(out[0]) if scalar else out


# -- joint sampler for Monte Carlo work ---------------------------------------


class LimitProcessSampler:
    """Draws W* and V* jointly from one bridge per path.

    Precomputes the union of all t-points the bridge must visit (the t-grid,
    the F-images of the x-grid, and the F-images of the quadrature abscissae)
    so each draw costs one vector of Gaussian increments plus a few gathers.
    """

    def __init__(
        self,
        spec: LimitProcessSpec,
        t_points: np.ndarray | None = None,
        x_points: np.ndarray | None = None,
    ) -> None:
        self.spec = spec
        kernel = spec.kernel
        self.t_points = None if t_points is None else np.asarray(t_points, dtype=float)
        self.x_points = None if x_points is None else np.asarray(x_points, dtype=float)
        self.s_grid = quadrature_grid(spec)

        pieces = [kernel.cdf(self.s_grid)]
        if self.t_points is not None:
            pieces.append(self.t_points)
        if self.x_points is not None:
            pieces.append(kernel.cdf(self.x_points))
        merged = np.concatenate(pieces)
        self._union, inverse = np.unique(merged, return_inverse=True)
        split_s = self.s_grid.size
        self._idx_s = inverse[:split_s]
        offset = split_s
        self._idx_t = None
        if self.t_points is not None:
            self._idx_t = inverse[offset : offset + self.t_points.size]
            offset += self.t_points.size
        self._idx_x = None
        if self.x_points is not None:
            self._idx_x = inverse[offset : offset + self.x_points.size]

        work = self._union
        self._lead = 0
        if work.size == 0 or work[0] > 0.0:
            work = np.concatenate(([0.0], work))
            self._lead = 1
        if work[-1] < 1.0:
            work = np.concatenate((work, [1.0]))
        self._work = work
        self._sqrt_dt = np.sqrt(np.diff(work))

        self._phi_over_m = None
        if self.t_points is not None:
            self._phi_over_m = _phi_allowing_one(kernel, self.t_points) / kernel.m
        self._xf_over_m = None
        if self.x_points is not None:
            self._xf_over_m = self.x_points * kernel.pdf(self.x_points) / kernel.m

    def sample(self, rng: np.random.Generator) -> dict:
        """One joint draw: keys 'w_star', 'v_star' (arrays or None), 'integral'."""
        increments = rng.standard_normal(self._sqrt_dt.size) * self._sqrt_dt
        wiener = np.concatenate(([0.0], np.cumsum(increments)))
        bridge = wiener - self._work * wiener[-1]
        on_union = bridge[self._lead : self._lead + self._union.size]
        integral = float(np.trapezoid(on_union[self._idx_s], self.s_grid))
        out = {"integral": integral, "w_star": None, "v_star": None}
        if self._idx_t is not None:
            out["w_star"] = on_union[self._idx_t] - self._phi_over_m * integral
        if self._idx_x is not None:
            out["v_star"] = on_union[self._idx_x] - self._xf_over_m * integral
        return out

    def union_bridge(self, rng: np.random.Generator) -> BridgePath:
        """The underlying bridge on the union grid, for the modular ops."""
        return simulate_bridge(self._union, rng)


# -- quadrature identities -----------------------------------------------------


def integrated_bridge_covariance(kernel: GammaKernel, t: float, panels: int = 4096) -> float:
    """c(t) = integral over s of Cov(B(t), B(F(s))) = min(t, F(s)) - t F(s).

    Splitting at s = Q(t) removes the kink: below it the integrand is
    (1 - t) F(s), above it t (1 - F(s)).  This equals phi(t) analytically.
    """
    if not 0.0 <= t < 1.0:
        raise ValueError("t must lie in [0, 1)")
    if t == 0.0:
        return 0.0
    split = kernel.quantile(t)
    upper = kernel.truncation_point(1e-12)
    low = composite_simpson(kernel.cdf, 0.0, split, panels)
    high = composite_simpson(kernel.sf, split, max(upper, split), panels)
    return (1.0 - t) * low + t * high


def sigma1_squared_quadrature(kernel: GammaKernel, resolution: int = 1 << 17) -> float:
    """Variance of the bridge integral via its covariance kernel.

    Equals 2 * integral of (1 - F(x)) * (integral of F up to x) dx, which
    collapses to the gamma mean m.
    """
    upper = kernel.truncation_point(1e-12)
    xs = np.linspace(0.0, upper, resolution)
    f_vals = kernel.cdf(xs)
    inner = cumulative_trapezoid(f_vals, xs)
    return float(2.0 * np.trapezoid((1.0 - f_vals) * inner, xs))


def normal_sf(x) -> np.ndarray | float:
    """Standard normal survival function via erfc."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    out = np.array([0.5 * math.erfc(v / math.sqrt(2.0)) for v in np.atleast_1d(arr)])
    return float(out[0]) if scalar else out


def increment_exceedance(paths: np.ndarray, grid: np.ndarray, h: float, v: float) -> float:
    """Fraction of paths whose largest increment over windows of width <= h
    reaches v * sqrt(h).  Paths are rows sampled on a uniform grid."""
    grid = np.asarray(grid, dtype=float)
    steps = np.diff(grid)
    if steps.size == 0:
        return 0.0
    dt = float(steps[0])
    if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, 1.0):
        raise ValueError("increment_exceedance requires a uniform grid")
    lag_max = int(math.floor(h / dt + 1e-9))
    if lag_max < 1:
        return 0.0
    paths = np.atleast_2d(np.asarray(paths, dtype=float))
    worst = np.zeros(paths.shape[0])
    for lag in range(1, lag_max + 1):
        diffs = np.abs(paths[:, lag:] - paths[:, :-lag])
        np.maximum(worst, diffs.max(axis=1), out=worst)
    return float(np.mean(worst >= v * math.sqrt(h)))
