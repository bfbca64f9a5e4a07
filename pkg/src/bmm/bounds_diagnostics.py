"""Closed-form bounds on BMM error and Monte-Carlo checks of each one.

Calculators are pure functions of their arguments.  Experiments draw their
data from substreams keyed by (seed, trial) and report the empirical value
next to the bound in a :class:`BoundReport`.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _parallel
from ._validate import as_sample, check_count, check_positive, check_seed
from .core_estimators import EstimatorConfig, bmm, median_of_means, summary_stats
from .dirichlet import RngStream, child_seed
from .dirichlet_mean_analytics import (
    DensitySpec,
    conditional_median,
    conditional_variance,
    density_y,
)
from .distributions import DistributionSpec
from .errors import AtomError, ConfigError, DomainError

_GRID_POINTS = 101


@dataclass(frozen=True)
class BoundReport:
    """An empirical quantity set against its theoretical bound.

    ``satisfied`` is ``empirical_value <= bound_value + 3 * standard_error``.
    ``bound_clamped`` caps probability bounds at 1; for other bounds it
    equals ``bound_value``.
    """

    bound_value: float
    empirical_value: float
    n_trials: int
    standard_error: float
    label: str = ""
    bound_clamped: float = None
    satisfied: bool = field(init=False)

    def __post_init__(self):
        if self.bound_clamped is None:
            object.__setattr__(self, "bound_clamped", self.bound_value)
        ok = self.empirical_value <= self.bound_value + 3.0 * self.standard_error
        object.__setattr__(self, "satisfied", bool(ok))

    def to_dict(self):
        return {
            "label": self.label,
            "bound_value": self.bound_value,
            "bound_clamped": self.bound_clamped,
            "empirical_value": self.empirical_value,
            "standard_error": self.standard_error,
            "n_trials": self.n_trials,
            "satisfied": self.satisfied,
        }


@dataclass(frozen=True)
class MSEIdentityReport:
    """Terms of the decomposition of the MSE of a point estimate p around the mean.

    lhs = mse_mean + discrepancy - 2 var_mean (1 - correlation sqrt(var_p / var_mean))
    holds in expectation; ``identity_residual`` is the plug-in gap.
    """

    lhs: float
    mse_mean: float
    discrepancy: float
    correlation: float
    var_mean: float
    var_p: float
    identity_residual: float
    residual_se: float
    n_trials: int

    def to_dict(self):
        return dict(self.__dict__)


# calculators ---------------------------------------------------------------


def mean_median_gap_bound(sigma):
    """|median - mean| <= sigma for any law with standard deviation sigma."""
    if not sigma >= 0:
        raise ConfigError(f"sigma must be nonnegative, got {sigma!r}")
    return float(sigma)


def exp_concentration_gap_bound(a, b):
    """Mean-median gap under P[|X - EX| > t] <= a exp(-b t^2): min(sqrt(ab), a sqrt(pi b)/2)."""
    a = check_positive(a, "a")
    b = check_positive(b, "b")
    return min(math.sqrt(a * b), a * math.sqrt(math.pi * b) / 2.0)


def mm_deviation_bound(sigma, n, delta):
    """Median-of-means deviation at confidence 1 - delta: 6 sigma sqrt(log(1/delta)/n)."""
    if not sigma >= 0:
        raise ConfigError(f"sigma must be nonnegative, got {sigma!r}")
    n = check_count(n, "n")
    if not 0 < delta <= 1:
        raise ConfigError(f"delta must lie in (0, 1], got {delta!r}")
    return 6.0 * sigma * math.sqrt(math.log(1.0 / delta) / n)


def mm_groups(delta):
    """Number of blocks ceil(8 log(1/delta)), at least 1."""
    if not 0 < delta <= 1:
        raise ConfigError(f"delta must lie in (0, 1], got {delta!r}")
    return max(1, math.ceil(8.0 * math.log(1.0 / delta)))


def bmm_small_t_bound(J, t, C=1.0):
    """P[|BMM - m| > t] <= 2 exp(-2 J t^2 C^2), returned unclamped."""
    J = check_count(J, "J")
    if not t >= 0:
        raise ConfigError(f"t must be nonnegative, got {t!r}")
    C = check_positive(C, "C")
    return 2.0 * math.exp(-2.0 * J * t * t * C * C)


def bmm_large_t_bound(J, t, cond_var):
    """P[|BMM - m| > t] <= (4 sqrt(V) / t)^(J/2), valid for t > 2 sqrt(V)."""
    J = check_count(J, "J")
    if not cond_var >= 0:
        raise ConfigError(f"cond_var must be nonnegative, got {cond_var!r}")
    sd = math.sqrt(cond_var)
    if not t > 2.0 * sd:
        raise DomainError(f"large-t bound needs t > 2 sqrt(V) = {2.0 * sd:.6g}, got t={t}")
    return (4.0 * sd / t) ** (J / 2.0)


def median_bias_bounds(alpha, sample=None, sigma2=None, n=None):
    """Bounds on |med(Y) - theta| (unconditional) and |med(Y | sample) - mean| (conditional).

    unconditional = sqrt(sigma2/n * n(alpha+1)/(n alpha+1)), needs ``sigma2``
    and ``n`` (``n`` defaults to the sample size); conditional =
    sqrt(s^2/(n alpha+1)) with the 1/n sample variance, needs ``sample``.
    A bound whose inputs are missing is NaN.
    """
    alpha = check_positive(alpha, "alpha")
    cond = math.nan
    if sample is not None:
        x = as_sample(sample)
        n = x.size if n is None else n
        cond = math.sqrt(summary_stats(x).variance_biased / (x.size * alpha + 1.0))
    uncond = math.nan
    if sigma2 is not None:
        if not sigma2 >= 0:
            raise ConfigError(f"sigma2 must be nonnegative, got {sigma2!r}")
        if n is None:
            raise ConfigError("the unconditional bound needs n")
        n = check_count(n, "n")
        uncond = math.sqrt(sigma2 / n * n * (alpha + 1.0) / (n * alpha + 1.0))
    return uncond, cond


def bias_bound_total(J, n, alpha, sigma2, C_tilde):
    """Bound on |E[BMM] - theta|.

    sqrt(pi/(2J)) * C_tilde + 2/(J-2) * 4 n^(-J/4) sigma / sqrt(alpha)
    + sqrt(sigma2/(n alpha + 1)), where C_tilde = sqrt(E[1/C]) and C lower
    bounds the conditional density near the median.  The first term is
    sqrt(pi E[1/C] / (2J)), i.e. it scales with C_tilde.
    """
    J = check_count(J, "J")
    if J <= 2:
        raise DomainError(f"bias bound needs J > 2, got {J}")
    n = check_count(n, "n")
    alpha = check_positive(alpha, "alpha")
    if not sigma2 >= 0:
        raise ConfigError(f"sigma2 must be nonnegative, got {sigma2!r}")
    C_tilde = check_positive(C_tilde, "C_tilde")
    sigma = math.sqrt(sigma2)
    # n^(-J/4) underflows harmlessly to 0 for large J
    tail = 2.0 / (J - 2.0) * 4.0 * math.exp(-J / 4.0 * math.log(n)) * sigma / math.sqrt(alpha)
    return math.sqrt(math.pi / (2.0 * J)) * C_tilde + tail + math.sqrt(sigma2 / (n * alpha + 1.0))


def l1_error_bound(J, n, alpha, sigma2, C_tilde):
    """Bound on E|BMM - theta|: :func:`bias_bound_total` plus sqrt(sigma2/n)."""
    return bias_bound_total(J, n, alpha, sigma2, C_tilde) + math.sqrt(sigma2 / n)


def density_floor(sample, alpha, center, half_width, quad=None):
    """Minimum of the conditional density over a 101-point grid on
    [center - half_width, center + half_width], restricted to the open
    support of Y.  Grid points that land on an atom are skipped.
    """
    spec = sample if isinstance(sample, DensitySpec) else DensitySpec(sample, alpha)
    x = spec.sample
    lo, hi = float(x.min()), float(x.max())
    a, b = max(center - half_width, lo), min(center + half_width, hi)
    # interior grid: the support endpoints themselves carry zero density
    grid = np.linspace(a, b, _GRID_POINTS + 2)[1:-1] if (a == lo or b == hi) else np.linspace(a, b, _GRID_POINTS)
    vals = []
    for y in grid:
        try:
            vals.append(density_y(spec, y, quad))
        except AtomError:
            continue
    if not vals:
        raise DomainError("no grid point off the atoms")
    return float(min(vals))


# experiments ---------------------------------------------------------------


def _bmm_runs(args):
    x, alpha, J, seed, start, stop = args
    out = np.empty(stop - start)
    for k, t in enumerate(range(start, stop)):
        cfg = EstimatorConfig(alpha=alpha, J=J, seed=child_seed(seed, t))
        out[k] = bmm(x, cfg).estimate
    return out


def repeated_bmm(sample, alpha, J, trials, seed=0, workers=1):
    """BMM on a fixed sample with ``trials`` independent weight seeds."""
    x = as_sample(sample)
    trials = check_count(trials, "trials")
    seed = check_seed(seed)
    tasks = [(x, alpha, J, seed, a, b) for a, b in _parallel.split_range(trials, 4 * workers)]
    return np.concatenate(_parallel.pmap(_bmm_runs, tasks, workers))


def _variance_se(v):
    # standard error of the 1/(N-1) sample variance from the fourth central moment
    N = v.size
    d = v - v.mean()
    s2 = float(np.mean(d * d))
    m4 = float(np.mean(d**4))
    return float(np.var(v, ddof=1)), math.sqrt(max(m4 - s2 * s2, 0.0) / N)


def median_clt_check(sample, alpha, J, trials, seed=0, workers=1, quad=None):
    """Variance of BMM over repeated weight draws against 1/(4 J f(m)^2).

    ``f`` is the conditional density at the conditional median ``m``.
    """
    x = as_sample(sample)
    J = check_count(J, "J")
    trials = check_count(trials, "trials", minimum=2)
    if x.min() == x.max():
        return BoundReport(0.0, 0.0, trials, 0.0, "median_clt")
    spec = DensitySpec(x, alpha)
    m = conditional_median(x, alpha, quad)
    f = density_y(spec, m, quad)
    target = 1.0 / (4.0 * J * f * f)
    est = repeated_bmm(x, alpha, J, trials, seed, workers)
    var, se = _variance_se(est)
    return BoundReport(target, var, trials, se, "median_clt")


def concentration_experiment(sample, alpha, J, t_values, trials, seed=0, regime="small",
                             C=None, m=None, workers=1, quad=None):
    """Frequency of |BMM - m| > t over repeated weight draws, per t.

    ``regime="small"`` compares with :func:`bmm_small_t_bound`; ``C``
    defaults to :func:`density_floor` over [m - t, m + t].  ``regime="large"``
    compares with :func:`bmm_large_t_bound` at the exact conditional
    variance.  ``m`` defaults to the conditional median.
    """
    if regime not in ("small", "large"):
        raise ConfigError(f"regime must be 'small' or 'large', got {regime!r}")
    x = as_sample(sample)
    trials = check_count(trials, "trials")
    if m is None:
        m = conditional_median(x, alpha, quad)
    est = repeated_bmm(x, alpha, J, trials, seed, workers)
    reports = []
    for t in t_values:
        if regime == "small":
            c = C if C is not None else density_floor(x, alpha, m, t, quad)
            bound = bmm_small_t_bound(J, t, c)
        else:
            bound = bmm_large_t_bound(J, t, conditional_variance(x, alpha))
        p = float(np.mean(np.abs(est - m) > t))
        se = math.sqrt(p * (1.0 - p) / trials)
        reports.append(BoundReport(bound, p, trials, se, f"{regime}_t={t:g}", min(bound, 1.0)))
    return reports


def _conditional_bound_trials(args):
    dist, n, alphas, seed, mc_draws, start, stop = args
    worst = np.empty((stop - start, len(alphas)))
    for k, r in enumerate(range(start, stop)):
        x = dist.sample(n, RngStream(seed, r))
        mean = x.mean()
        for a_i, a in enumerate(alphas):
            med = conditional_median(x, a, mc_draws=mc_draws, seed=child_seed(seed, r, a_i))
            worst[k, a_i] = abs(med - mean) - median_bias_bounds(a, sample=x)[1]
    return worst


def median_gap_experiment(dist, n, alphas, trials, seed=0, mc_draws=10**5, workers=1):
    """Excess |med(Y | x) - mean(x)| - sqrt(s^2/(n alpha+1)) over random samples.

    The conditional median is exact where a density formula applies and a
    ``mc_draws`` simulation otherwise.  Returns an array of shape
    (trials, len(alphas)); entries > 0 are violations.
    """
    dist = _as_dist(dist)
    tasks = [(dist, n, tuple(alphas), seed, mc_draws, a, b) for a, b in _parallel.split_range(trials, 4 * workers)]
    return np.concatenate(_parallel.pmap(_conditional_bound_trials, tasks, workers))


def _as_dist(dist):
    return dist if isinstance(dist, DistributionSpec) else DistributionSpec.parse(dist)


def _bias_trials(args):
    dist, n, alpha, J, seed, start, stop = args
    out = np.empty(stop - start)
    for k, r in enumerate(range(start, stop)):
        x = dist.sample(n, RngStream(seed, r))
        out[k] = bmm(x, EstimatorConfig(alpha, J, child_seed(seed, r, 1))).estimate
    return out


def bias_bound_experiment(dist, n, alpha, J, trials, seed=0, c_samples=20, workers=1, quad=None):
    """|mean(BMM) - theta| over ``trials`` data sets against :func:`bias_bound_total`.

    C_tilde = sqrt(mean(1/C)) is estimated on the first ``c_samples`` data
    sets, with C the density floor over [m - t0, m + t0], t0 = 4 sqrt(s^2/alpha).
    Needs an (n, alpha) pair with a density formula.
    """
    dist = _as_dist(dist)
    n = check_count(n, "n")
    trials = check_count(trials, "trials", minimum=2)
    theta, sigma2 = dist.true_mean(), dist.variance()
    inv_c = []
    for r in range(min(c_samples, trials)):
        x = dist.sample(n, RngStream(seed, r))
        m = conditional_median(x, alpha, quad)
        t0 = 4.0 * math.sqrt(summary_stats(x).variance_biased / alpha)
        inv_c.append(1.0 / density_floor(x, alpha, m, t0, quad))
    c_tilde = math.sqrt(float(np.mean(inv_c)))
    tasks = [(dist, n, alpha, J, seed, a, b) for a, b in _parallel.split_range(trials, 4 * workers)]
    est = np.concatenate(_parallel.pmap(_bias_trials, tasks, workers))
    gap = abs(float(est.mean()) - theta)
    se = float(est.std(ddof=1)) / math.sqrt(trials)
    return BoundReport(bias_bound_total(J, n, alpha, sigma2, c_tilde), gap, trials, se, "bias")


def mm_deviation_experiment(dist, n, delta, trials, seed=0):
    """Frequency of |MM - theta| > 6 sigma sqrt(log(1/delta)/n) with g = ceil(8 log(1/delta)).

    The bound is the probability ``delta``.
    """
    dist = _as_dist(dist)
    n = check_count(n, "n")
    trials = check_count(trials, "trials")
    g = min(mm_groups(delta), n)
    theta, sigma = dist.true_mean(), math.sqrt(dist.variance())
    radius = mm_deviation_bound(sigma, n, delta)
    hits = 0
    for r in range(trials):
        x = dist.sample(n, RngStream(seed, r))
        hits += abs(median_of_means(x, g) - theta) > radius
    p = hits / trials
    return BoundReport(float(delta), p, trials, math.sqrt(p * (1.0 - p) / trials), f"mm_g={g}")


def _paired_trials(args):
    dist, n, alpha, J, seed, start, stop = args
    out = np.empty((stop - start, 2))
    for k, r in enumerate(range(start, stop)):
        x = dist.sample(n, RngStream(seed, r))
        out[k, 0] = x.mean()
        out[k, 1] = bmm(x, EstimatorConfig(alpha, J, child_seed(seed, r, 1))).estimate
    return out


def _identity_terms(mb, p, theta):
    # mb, p: (..., N) arrays of paired estimates; returns the report terms
    lhs = np.mean((p - theta) ** 2, axis=-1)
    mse_mean = np.mean((mb - theta) ** 2, axis=-1)
    disc = np.mean((p - mb) ** 2, axis=-1)
    var_mean = np.var(mb, axis=-1)
    var_p = np.var(p, axis=-1)
    cov = np.mean((mb - mb.mean(axis=-1, keepdims=True)) * (p - p.mean(axis=-1, keepdims=True)), axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.where(var_mean * var_p > 0, cov / np.sqrt(var_mean * var_p), 1.0)
    resid = lhs - (mse_mean + disc - 2.0 * var_mean * (1.0 - corr * np.sqrt(var_p / var_mean)))
    return lhs, mse_mean, disc, corr, var_mean, var_p, resid


def _jackknife_residual_se(mb, p, theta):
    # leave-one-out values from running sums of the raw moments
    N = mb.size
    cols = np.stack([mb, p, mb * mb, p * p, mb * p])
    loo = (cols.sum(axis=1, keepdims=True) - cols) / (N - 1)
    m1, p1, m2, p2, mp = loo
    var_m, var_p = m2 - m1 * m1, p2 - p1 * p1
    cov = mp - m1 * p1
    lhs = p2 - 2.0 * theta * p1 + theta**2
    mse_m = m2 - 2.0 * theta * m1 + theta**2
    disc = p2 - 2.0 * mp + m2
    resid = lhs - (mse_m + disc - 2.0 * var_m + 2.0 * cov)
    return math.sqrt((N - 1) / N * np.sum((resid - resid.mean()) ** 2))


def mse_identity_experiment(dist, n, alpha, J=None, trials=10_000, seed=0, workers=1):
    """Paired estimate of the MSE decomposition of BMM around the sample mean."""
    dist = _as_dist(dist)
    n = check_count(n, "n")
    trials = check_count(trials, "trials", minimum=3)
    theta = dist.true_mean()
    if not dist.finite_variance:
        raise DomainError(f"{dist} has infinite variance")
    tasks = [(dist, n, alpha, J, seed, a, b) for a, b in _parallel.split_range(trials, 4 * workers)]
    est = np.concatenate(_parallel.pmap(_paired_trials, tasks, workers))
    mb, p = est[:, 0], est[:, 1]
    terms = [float(v) for v in _identity_terms(mb, p, theta)]
    return MSEIdentityReport(*terms, _jackknife_residual_se(mb, p, theta), trials)
