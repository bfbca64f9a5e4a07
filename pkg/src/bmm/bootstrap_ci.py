"""Percentile bootstrap intervals for BMM.

With ``fix_dirichlet_draws`` the J weight vectors are drawn once and reused
by every bootstrap replicate, so each replicate costs one (J, n) product
instead of fresh Dirichlet sampling.

Streams derived from ``config.seed``:

* ``(seed, 0)`` the shared weight matrix (also used for the point estimate),
* ``(seed, 1)`` the resampling indices,
* ``(child_seed(seed, 2), b)`` fresh weights for replicate ``b`` when the
  draws are not fixed.

Resampling therefore does not depend on ``fix_dirichlet_draws``.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, _parallel
from ._validate import as_sample, check_count, check_positive, check_seed
from .dirichlet import RngStream, child_seed, derive_substream, dirichlet_rows
from .distributions import DistributionSpec
from .errors import ConfigError

# np.quantile method; linear interpolation between order statistics
QUANTILE_METHOD = "linear"


@dataclass(frozen=True)
class CIConfig:
    level_complement: float = 0.05
    B: int = 1000
    J: int = None
    alpha: float = 1.0
    seed: int = 0
    fix_dirichlet_draws: bool = True

    def __post_init__(self):
        if not 0.0 < self.level_complement < 1.0:
            raise ConfigError(f"level_complement must lie in (0, 1), got {self.level_complement!r}")
        check_count(self.B, "B", minimum=2)
        if self.J is not None:
            check_count(self.J, "J")
        check_positive(self.alpha, "alpha")
        check_seed(self.seed)

    @property
    def level(self):
        return 1.0 - self.level_complement


@dataclass
class CIResult:
    lower: float
    upper: float
    point_estimate: float
    bootstrap_estimates: np.ndarray = field(default=None, repr=False)

    def to_dict(self):
        return {"lower": self.lower, "upper": self.upper, "point_estimate": self.point_estimate}


@dataclass(frozen=True)
class CoverageReport:
    nominal: float
    empirical: float
    n_draws: int
    misses_low: int
    misses_high: int

    def to_dict(self):
        return dict(self.__dict__)


def ci_bmm(sample, config=None, keep_replicates=False):
    """Percentile bootstrap interval for BMM.

    Parameters
    ----------
    sample : array_like
    config : CIConfig, optional
    keep_replicates : bool
        Attach the B replicate estimates to the result.

    Returns
    -------
    CIResult
    """
    x = as_sample(sample)
    config = config or CIConfig()
    n = x.size
    J = n if config.J is None else config.J
    B = config.B
    W = dirichlet_rows(n, config.alpha, derive_substream(config.seed, 0).generator(), J)
    point = float(np.median(_kernels.weighted_means(W, x)))
    if x.min() == x.max():
        c = float(x[0])
        reps = np.full(B, c) if keep_replicates else None
        return CIResult(c, c, c, reps)
    idx = derive_substream(config.seed, 1).generator().integers(0, n, size=(B, n))
    if config.fix_dirichlet_draws:
        reps = _kernels.bootstrap_medians(W, x, idx)
    else:
        fresh = child_seed(config.seed, 2)
        reps = np.empty(B)
        for b in range(B):
            Wb = dirichlet_rows(n, config.alpha, derive_substream(fresh, b).generator(), J)
            reps[b] = np.median(_kernels.weighted_means(Wb, x[idx[b]]))
    half = config.level_complement / 2.0
    lo, hi = np.quantile(reps, [half, 1.0 - half], method=QUANTILE_METHOD)
    return CIResult(float(lo), float(hi), point, reps if keep_replicates else None)


def _coverage_block(args):
    dist, n, config, seed, theta, start, stop = args
    low = high = 0
    for d in range(start, stop):
        x = dist.sample(n, RngStream(seed, d))
        cfg = CIConfig(config.level_complement, config.B, config.J, config.alpha,
                       child_seed(seed, d, 1), config.fix_dirichlet_draws)
        r = ci_bmm(x, cfg)
        low += theta < r.lower
        high += theta > r.upper
    return low, high


def coverage_experiment(dist, n, config=None, n_draws=1000, seed=0, workers=1):
    """Coverage of :func:`ci_bmm` for the true mean over ``n_draws`` data sets.

    Data set ``d`` comes from stream ``(seed, d)`` and its interval uses
    seed ``child_seed(seed, d, 1)``; ``config.seed`` is ignored.
    A miss is low when the true mean lies below the interval.
    """
    dist = dist if isinstance(dist, DistributionSpec) else DistributionSpec.parse(dist)
    config = config or CIConfig()
    n = check_count(n, "n")
    n_draws = check_count(n_draws, "n_draws")
    seed = check_seed(seed)
    theta = dist.true_mean()
    tasks = [(dist, n, config, seed, theta, a, b) for a, b in _parallel.split_range(n_draws, 4 * workers)]
    parts = _parallel.pmap(_coverage_block, tasks, workers)
    low = int(sum(p[0] for p in parts))
    high = int(sum(p[1] for p in parts))
    return CoverageReport(config.level, 1.0 - (low + high) / n_draws, n_draws, low, high)
