"""Uniform non-overlapping m-spacings processes and their Gaussian limits.

Exact spacings computation, the exponential block-sum representation and its
algebraic reassembly identities, grid-exact Brownian bridge and limit-process
simulation with closed-form covariances, and a seeded Monte Carlo lab that
verifies rate exponents and limit laws at desk scale.
"""

from .gamma import GammaKernel
from .gaussian import (
    BridgePath,
    LimitProcessSampler,
    LimitProcessSpec,
    bridge_integral,
    covariance_V,
    covariance_W,
    limit_V,
    limit_W,
    simulate_bridge,
)
from .process import ProcessPath, t_grid, x_grid
from .pyke import (
    ExponentialBlock,
    alpha_via_representation,
    beta_process,
    gamma_via_representation,
    general_n_empirical,
    kappa_process,
    sample_block,
    spacings_via_pyke,
    uniform_quantile_process,
)
from .rates import (
    ExperimentPlan,
    ExperimentReport,
    ks_one_sample,
    ks_two_sample,
    run_experiment,
)
from .spacings import (
    OrderedSpacings,
    SortedUniformSample,
    SpacingsSet,
    alpha_process,
    compute_spacings,
    gamma_process,
)
from .streams import substream

__version__ = "0.1.0"

__all__ = [
    "GammaKernel",
    "ProcessPath",
    "BridgePath",
    "LimitProcessSampler",
    "LimitProcessSpec",
    "SortedUniformSample",
    "SpacingsSet",
    "OrderedSpacings",
    "ExponentialBlock",
    "ExperimentPlan",
    "ExperimentReport",
    "alpha_process",
    "gamma_process",
    "compute_spacings",
    "sample_block",
    "spacings_via_pyke",
    "beta_process",
    "kappa_process",
    "uniform_quantile_process",
    "alpha_via_representation",
    "gamma_via_representation",
    "general_n_empirical",
    "simulate_bridge",
    "bridge_integral",
    "limit_W",
    "limit_V",
    "covariance_W",
    "covariance_V",
    "run_experiment",
    "ks_two_sample",
    "ks_one_sample",
    "substream",
    "t_grid",
    "x_grid",
    "__version__",
]
