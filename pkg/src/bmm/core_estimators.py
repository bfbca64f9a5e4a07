"""Point estimators of a location parameter from a vector of unbiased estimates.

The Bayesian median of means (BMM) draws J weight vectors from a symmetric
Dirichlet, forms the weighted averages of the sample, and returns their
median.  ``alpha`` moves it between the sample median (alpha -> 0) and the
sample mean (alpha -> inf).  The approximate BMM replaces the random
procedure by a closed-form skewness correction of the mean.
"""
import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._validate import as_sample, check_count, check_positive, check_seed
from .dirichlet import derive_substream, dirichlet_rows
from .errors import ConfigError, EmptyInputError

# Upper bound on the number of weights materialized per chunk.
_CHUNK_CELLS = 4_000_000
_MAX_CHUNK_ROWS = 4096


class Method(str, enum.Enum):
    MEAN = "mean"
    MEDIAN = "median"
    BMM = "bmm"
    ABMM = "abmm"
    MM = "mm"
    HL = "hl"


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    variance_biased: float
    skewness: float
    min: float
    max: float


@dataclass(frozen=True)
class EstimatorConfig:
    """Settings for :func:`bmm`.

    ``J=None`` means one Dirichlet draw per data point (J = n).
    """

    alpha: float = 1.0
    J: int = None
    seed: int = 0

    def __post_init__(self):
        check_positive(self.alpha, "alpha")
        if self.J is not None:
            check_count(self.J, "J")
        check_seed(self.seed)

    def resolved_J(self, n):
        return n if self.J is None else int(self.J)


@dataclass
class EstimateReport:
    estimate: float
    method: Method
    config: EstimatorConfig = None
    resampled_means: np.ndarray = field(default=None, repr=False)


def summary_stats(sample):
    """Mean, 1/n variance, 1/n skewness, min and max of the sample.

    Skewness is defined as 0 when the variance is 0.
    """
    x = as_sample(sample)
    mean = float(np.mean(x))
    d = x - mean
    var = float(np.mean(d * d))
    if var > 0.0:
        skew = float(np.mean(d**3) / var**1.5)
    else:
        var, skew = 0.0, 0.0
    return SummaryStats(mean, var, skew, float(x.min()), float(x.max()))


def sample_mean(sample):
    return float(np.mean(as_sample(sample)))


def sample_median(values):
    """Median; the average of the two middle order statistics for even length."""
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyInputError("median of an empty vector")
    return float(np.median(x))


def _chunk_rows(n):
    return max(1, min(_MAX_CHUNK_ROWS, _CHUNK_CELLS // n))


def resampled_means(sample, alpha, J, seed):
    """The J Dirichlet-weighted means Y_j = sum_i p_i^(j) x_i.

    Weight vectors are drawn in fixed-size chunks; chunk ``c`` comes from
    substream ``(seed, c)``, so the output depends only on the arguments.
    """
    x = as_sample(sample)
    alpha = check_positive(alpha, "alpha")
    J = check_count(J, "J")
    seed = check_seed(seed)
    n = x.size
    rows = _chunk_rows(n)
    out = np.empty(J)
    for c, start in enumerate(range(0, J, rows)):
        stop = min(start + rows, J)
        rng = derive_substream(seed, c).generator()
        W = dirichlet_rows(n, alpha, rng, stop - start)
        out[start:stop] = _kernels.weighted_means(W, x)
    return out


def bmm(sample, config=None, keep_means=False):
    """Bayesian median of means.

    Parameters
    ----------
    sample : array_like
        Unbiased estimates of the target.
    config : EstimatorConfig, optional
        Defaults to alpha=1, J=n, seed=0.
    keep_means : bool
        Retain the J weighted means in the report.

    Returns
    -------
    EstimateReport
    """
    x = as_sample(sample)
    if config is None:
        config = EstimatorConfig()
    elif not isinstance(config, EstimatorConfig):
        raise ConfigError(f"expected EstimatorConfig, got {type(config).__name__}")
    J = config.resolved_J(x.size)
    lo, hi = x.min(), x.max()
    if lo == hi:
        y = np.full(J, lo) if keep_means else None
        return EstimateReport(float(lo), Method.BMM, config, y)
    y = resampled_means(x, config.alpha, J, config.seed)
    est = float(np.clip(np.median(y), lo, hi))
    return EstimateReport(est, Method.BMM, config, y if keep_means else None)


def abmm(sample, alpha=1.0):
    """Approximate BMM: the mean minus a skewness correction.

    mean - (1/3) * sqrt(s2) * skew / (n * alpha + 2), with the 1/n
    variance and skewness of the sample.
    """
    x = as_sample(sample)
    alpha = check_positive(alpha, "alpha")
    st = summary_stats(x)
    if st.variance_biased == 0.0:
        return st.mean
    return st.mean - np.sqrt(st.variance_biased) * st.skewness / (3.0 * (x.size * alpha + 2.0))


def median_of_means(sample, g):
    """Median of the means of ``g`` consecutive blocks.

    The first ``n % g`` blocks hold one extra element.  Depends on the
    order of the sample.
    """
    x = as_sample(sample)
    if isinstance(g, bool) or int(g) != g or not (1 <= g <= x.size):
        raise ConfigError(f"number of blocks g must be in [1, {x.size}], got {g!r}")
    blocks = np.array_split(x, int(g))
    return float(np.median([b.mean() for b in blocks]))


def hodges_lehmann(sample):
    """Median of all pairwise averages (x_i + x_j)/2 with i < j."""
    x = as_sample(sample)
    if x.size < 2:
        raise ConfigError("Hodges-Lehmann needs at least two values")
    if x.min() == x.max():
        return float(x[0])
    return _kernels.pairwise_average_median(x)


def estimate(sample, method, config=None, g=3):
    """Dispatch to one estimator by name; returns an EstimateReport."""
    method = Method(method)
    config = config or EstimatorConfig()
    if method is Method.BMM:
        return bmm(sample, config)
    if method is Method.MEAN:
        value = sample_mean(sample)
    elif method is Method.MEDIAN:
        value = sample_median(as_sample(sample))
    elif method is Method.ABMM:
        value = abmm(sample, config.alpha)
    elif method is Method.MM:
        value = median_of_means(sample, g)
    else:
        value = hodges_lehmann(sample)
    return EstimateReport(float(value), method, config)
