"""Spacings from sums of exponentials, and the block-sum process algebra.

Uniform spacings are distributed like unit exponentials normalized by their
total (Pyke's representation).  Grouping the exponentials into blocks of m
gives an i.i.d. Gamma(m, 1) sample Y_1..Y_N whose empirical and quantile
processes (beta, kappa), together with the uniformized quantile process U_N,
reassemble the spacings processes exactly on shared randomness.  Those exact
reassembly identities are exposed here as paired "assembled vs direct"
constructors; tests hold them to 1e-10 pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gamma import GammaKernel
from .process import ProcessPath
from .spacings import SpacingsSet, alpha_process, cell_index, gamma_process
from .streams import standard_exponentials, substream

__all__ = [
    "ExponentialBlock",
    "sample_block",
    "spacings_via_pyke",
    "beta_process",
    "kappa_process",
    "uniform_quantile_process",
    "alpha_via_representation",
    "gamma_via_representation",
    "general_n_empirical",
]


@dataclass(frozen=True, eq=False)
class ExponentialBlock:
    """n unit exponentials grouped into N = floor(n/m) blocks of m.

    ``block_sums`` holds the full-block sums Y_i; when m does not divide n the
    leftover exponentials go into ``tail_sum`` and belong to the last spacing.
    """

    exponentials: np.ndarray
    m: int

    def __post_init__(self) -> None:
        exps = np.asarray(self.exponentials, dtype=float)
        object.__setattr__(self, "exponentials", exps)
        if self.m < 1:
            raise ValueError("block order m must be >= 1")
        if exps.ndim != 1 or exps.size < self.m:
            raise ValueError(f"need at least m={self.m} exponentials, got {exps.size}")
        if np.any(exps <= 0.0):
            raise ValueError("exponentials must be strictly positive")

    @property
    def n(self) -> int:
        return int(self.exponentials.size)

    @property
    def count(self) -> int:
        """Number of full blocks N = floor(n / m)."""
        return self.n // self.m

    @property
    def block_sums(self) -> np.ndarray:
        """Full-block sums Y_i = sum of exponentials (i-1)m+1 .. im."""
        n_count = self.count
        return self.exponentials[: n_count * self.m].reshape(n_count, self.m).sum(axis=1)

    @property
    def total(self) -> float:
        """T_N, the sum of the full-block sums."""
        return float(self.block_sums.sum())

    @property
    def tail_sum(self) -> float:
        """Sum of the n mod m leftover exponentials."""
        return float(self.exponentials[self.count * self.m :].sum())

    @property
    def partial_sum(self) -> float:
        """S_n, the sum of all n exponentials."""
        return float(self.exponentials.sum())

    def sorted_block_sums(self) -> np.ndarray:
        return np.sort(self.block_sums)

    def empirical_cdf(self, x):
        """G_N, the empirical cdf of the block sums (with <=)."""
        xs = np.asarray(x, dtype=float)
        scalar = xs.ndim == 0
        counts = np.searchsorted(self.sorted_block_sums(), np.atleast_1d(xs), side="right")
        out = counts / self.count
        return float(out[0]) if scalar else out

    def quantile_function(self, t):
        """K_N, the empirical quantile function of the block sums; 0 at t = 0."""
        ts = np.asarray(t, dtype=float)
        scalar = ts.ndim == 0
        ts1 = np.atleast_1d(ts)
        if np.any(ts1 < 0.0) or np.any(ts1 > 1.0):
            raise ValueError("quantile function requires t in [0, 1]")
        idx = cell_index(ts1, self.count)
        sorted_sums = self.sorted_block_sums()
        out = np.where(idx == 0, 0.0, sorted_sums[np.maximum(idx, 1) - 1])
        return float(out[0]) if scalar else out


def sample_block(n: int, m: int, rng: int | np.random.Generator) -> ExponentialBlock:
    """Draw n unit exponentials from the given stream (seed or generator)."""
    if n < m:
        raise ValueError(f"need n >= m, got n={n}, m={m}")
    if not isinstance(rng, np.random.Generator):
        rng = substream(int(rng))
    return ExponentialBlock(exponentials=standard_exponentials(rng, n), m=m)


def spacings_via_pyke(block: ExponentialBlock) -> SpacingsSet:
    """Spacings as normalized exponential block sums.

    The first N - 1 spacings are Y_i / S_n; the last combines the final full
    block with the leftover exponentials, mirroring how the last m-spacing of
    a sample runs all the way to 1.  For n = m*N this reduces to Y_i / T_N.
    """
    n_count = block.count
    total = block.partial_sum
    sums = block.block_sums
    spac = np.empty(n_count)
    spac[: n_count - 1] = sums[: n_count - 1] / total
    spac[n_count - 1] = (sums[n_count - 1] + block.tail_sum) / total
    return SpacingsSet(m=block.m, n=block.n, spacings=spac)


def beta_process(block: ExponentialBlock, grid: np.ndarray, kernel: GammaKernel) -> ProcessPath:
    """Block-sum empirical process sqrt(N) * (G_N - F) on an x-grid."""
    _check_order(block, kernel)
    grid = np.asarray(grid, dtype=float)
    values = np.sqrt(block.count) * (block.empirical_cdf(grid) - kernel.cdf(grid))
    return ProcessPath(grid=grid, values=values, kind="beta", m=block.m, n=block.n, count=block.count)


def kappa_process(block: ExponentialBlock, grid: np.ndarray, kernel: GammaKernel) -> ProcessPath:
    """Block-sum quantile process sqrt(N) * f(Q(t)) * (Q(t) - K_N(t))."""
    _check_order(block, kernel)
    grid = np.asarray(grid, dtype=float)
    if np.any(grid >= 1.0):
        raise ValueError("kappa process grid must stay below 1")
    q = kernel.quantile(grid)
    values = np.sqrt(block.count) * kernel.pdf(q) * (q - block.quantile_function(grid))
    return ProcessPath(grid=grid, values=values, kind="kappa", m=block.m, n=block.n, count=block.count)


def uniform_quantile_process(block: ExponentialBlock, grid: np.ndarray, kernel: GammaKernel) -> ProcessPath:
    """Uniformized quantile process sqrt(N) * (t - F(K_N(t))) on [0, 1]."""
    _check_order(block, kernel)
    grid = np.asarray(grid, dtype=float)
    values = np.sqrt(block.count) * (grid - kernel.cdf(block.quantile_function(grid)))
    return ProcessPath(grid=grid, values=values, kind="uniform_quantile", m=block.m, n=block.n, count=block.count)


def alpha_via_representation(
    block: ExponentialBlock, grid: np.ndarray, kernel: GammaKernel
) -> tuple[ProcessPath, ProcessPath]:
    """Empirical process two ways: reassembled from beta, and direct.

    Requires n = m*N.  The assembled path is beta_N evaluated at x * T_N/(mN)
    plus the deterministic remainder sqrt(N) * (F(x * T_N/(mN)) - F(x)); the
    direct path feeds the normalized block sums through the spacings pipeline.
    The two agree pointwise up to rounding.
    """
    _check_order(block, kernel)
    if block.n != block.m * block.count:
        raise ValueError("representation requires n to be an exact multiple of m")
    grid = np.asarray(grid, dtype=float)
    ratio = block.total / (block.m * block.count)
    stretched = grid * ratio
    remainder = np.sqrt(block.count) * (kernel.cdf(stretched) - kernel.cdf(grid))
    assembled_values = beta_process(block, stretched, kernel).values + remainder
    assembled = ProcessPath(
        grid=grid, values=assembled_values, kind="alpha", m=block.m, n=block.n, count=block.count
    )
    direct = alpha_process(spacings_via_pyke(block), grid, kernel)
    return assembled, direct


def gamma_via_representation(
    block: ExponentialBlock, grid: np.ndarray, kernel: GammaKernel
) -> tuple[ProcessPath, ProcessPath]:
    """Quantile process two ways: reassembled from kappa, and direct.

    Requires n = m*N.  Assembled: (mN/T_N) * (kappa_N(t) + sqrt(N) *
    (T_N/(mN) - 1) * phi(t)).  Direct: sort the normalized block sums and feed
    them through the quantile-side pipeline.
    """
    _check_order(block, kernel)
    if block.n != block.m * block.count:
        raise ValueError("representation requires n to be an exact multiple of m")
    grid = np.asarray(grid, dtype=float)
    ratio = block.total / (block.m * block.count)
    kappa = kappa_process(block, grid, kernel)
    correction = np.sqrt(block.count) * (ratio - 1.0) * kernel.phi(grid)
    assembled = ProcessPath(
        grid=grid,
        values=(kappa.values + correction) / ratio,
        kind="gamma",
        m=block.m,
        n=block.n,
        count=block.count,
    )
    direct = gamma_process(spacings_via_pyke(block).ordered(), grid, kernel)
    return assembled, direct


def general_n_empirical(
    block: ExponentialBlock, grid: np.ndarray, kernel: GammaKernel
) -> tuple[ProcessPath, ProcessPath]:
    """Empirical process for general n, assembled from the padded block ecdf.

    The padded ecdf counts the N - 1 leading full blocks and the combined
    last spacing block with strict <, evaluated at x * S_n/(mN); this matches
    the direct construction from the normalized spacings except on the
    null set where a block sum ties the threshold exactly.
    """
    _check_order(block, kernel)
    grid = np.asarray(grid, dtype=float)
    n_count = block.count
    sums = block.block_sums
    spacing_blocks = np.sort(np.concatenate((sums[: n_count - 1], [sums[n_count - 1] + block.tail_sum])))
    thresholds = grid * (block.partial_sum / (block.m * n_count))
    padded_ecdf = np.searchsorted(spacing_blocks, thresholds, side="left") / n_count
    values = np.sqrt(n_count) * (padded_ecdf - kernel.cdf(grid))
    assembled = ProcessPath(grid=grid, values=values, kind="alpha", m=block.m, n=block.n, count=n_count)
    direct = alpha_process(spacings_via_pyke(block), grid, kernel)
    return assembled, direct


def _check_order(block: ExponentialBlock, kernel: GammaKernel) -> None:
    if kernel.m != block.m:
        raise ValueError(f"kernel order {kernel.m} does not match block order {block.m}")
