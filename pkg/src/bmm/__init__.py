"""Bayesian median of means: robust aggregation of unbiased estimates."""
from ._accel import get_backend, set_backend
from .bootstrap_ci import CIConfig, CIResult, CoverageReport, ci_bmm, coverage_experiment
from .core_estimators import (
    EstimateReport,
    EstimatorConfig,
    Method,
    abmm,
    bmm,
    estimate,
    hodges_lehmann,
    median_of_means,
    resampled_means,
    sample_mean,
    sample_median,
    summary_stats,
)
from .dirichlet import (
    RngStream,
    child_seed,
    derive_substream,
    sample_dirichlet_uniform_fast,
    sample_symmetric_dirichlet,
    weighted_mean,
)
from .dirichlet_mean_analytics import (
    DensityBranch,
    DensitySpec,
    QuadratureConfig,
    cdf_y,
    conditional_median,
    conditional_moment,
    conditional_moments,
    conditional_skewness,
    conditional_variance,
    density_y,
    unconditional_variance,
)
from .distributions import SHIPPED_SPECS, DistributionSpec
from .errors import (
    AtomError,
    BMMError,
    BudgetError,
    ConfigError,
    DomainError,
    EmptyInputError,
    NumericalError,
    QuadratureError,
    ShapeError,
    UndefinedMeanError,
    UnsupportedAlphaError,
    UnsupportedOrderError,
)
from .harness import SimulationReport, SimulationSpec, run_simulation, sample_distribution, true_mean
from .importance_sampling import (
    Aggregator,
    FibDraw,
    enumerate_fib_permutations,
    expo_is_terms,
    fib_oracle,
    is_estimate_fib,
    sample_fib_permutation,
    sample_fib_weights,
)

__version__ = "0.1.0"
