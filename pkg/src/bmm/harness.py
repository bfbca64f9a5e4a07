"""Monte-Carlo comparison of estimators on synthetic data.

Paired design: replication ``r`` draws its data from stream ``(seed, r)``,
and every estimator sees that same data.  BMM resamples with seed
``child_seed(seed, r, 1)``.  Changing the estimator set or the worker
count therefore never changes the numbers of the estimators kept.
"""
import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import _parallel
from ._validate import check_count, check_seed
from .core_estimators import EstimatorConfig, Method, estimate
from .dirichlet import RngStream, child_seed
from .distributions import DistributionSpec
from .errors import ConfigError

CSV_COLUMNS = ("estimator", "mse", "mad", "bias", "std", "mse_se")


def true_mean(dist):
    return _as_dist(dist).true_mean()


def sample_distribution(dist, n, stream):
    return _as_dist(dist).sample(check_count(n, "n"), stream)


def _as_dist(dist):
    return dist if isinstance(dist, DistributionSpec) else DistributionSpec.parse(dist)


@dataclass(frozen=True)
class SimulationSpec:
    dist: DistributionSpec
    n: int
    estimators: tuple = (Method.MEAN, Method.BMM)
    config: EstimatorConfig = field(default_factory=EstimatorConfig)
    replications: int = 1000
    seed: int = 0
    g: int = 3

    def __post_init__(self):
        object.__setattr__(self, "dist", _as_dist(self.dist))
        check_count(self.n, "n")
        check_count(self.replications, "replications", minimum=2)
        check_seed(self.seed)
        methods = tuple(dict.fromkeys(Method(m) for m in self.estimators))
        if not methods:
            raise ConfigError("at least one estimator is required")
        object.__setattr__(self, "estimators", methods)


@dataclass(frozen=True)
class EstimatorSummary:
    mse: float
    mad: float
    bias: float
    std: float
    mse_se: float
    mad_se: float


@dataclass
class SimulationReport:
    true_mean: float
    replications: int
    summaries: dict
    wins: dict
    estimates: dict = field(repr=False, default=None)

    def to_rows(self):
        return [
            {"estimator": m.value, "mse": s.mse, "mad": s.mad, "bias": s.bias, "std": s.std,
             "mse_se": s.mse_se}
            for m, s in self.summaries.items()
        ]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in self.to_rows():
            w.writerow({k: (v if k == "estimator" else repr(float(v))) for k, v in row.items()})
        return buf.getvalue()


def _replicate_block(args):
    spec, start, stop = args
    out = np.empty((stop - start, len(spec.estimators)))
    cfg = spec.config
    for k, r in enumerate(range(start, stop)):
        x = spec.dist.sample(spec.n, RngStream(spec.seed, r))
        rcfg = EstimatorConfig(cfg.alpha, cfg.J, child_seed(spec.seed, r, 1))
        for e, method in enumerate(spec.estimators):
            out[k, e] = estimate(x, method, rcfg, g=spec.g).estimate
    return out


def _summarize(est, theta):
    # jackknife over replications; for plain averages this is s / sqrt(R)
    R = est.size
    err = est - theta
    sq, ab = err * err, np.abs(err)
    se = lambda v: float(np.std(v, ddof=1) / math.sqrt(R))  # noqa: E731
    return EstimatorSummary(
        mse=float(sq.mean()), mad=float(ab.mean()), bias=float(err.mean()),
        std=float(np.std(est, ddof=1)), mse_se=se(sq), mad_se=se(ab),
    )


def run_simulation(spec, workers=1):
    """Run every estimator of ``spec`` on ``spec.replications`` data sets.

    Returns
    -------
    SimulationReport
        Per-estimator MSE, MAD, bias, standard deviation and jackknife
        standard errors; ``wins[m]`` counts replications where ``m`` had a
        strictly smaller absolute error than the mean.
    """
    theta = spec.dist.true_mean()
    blocks = _parallel.split_range(spec.replications, 4 * workers)
    est = np.concatenate(_parallel.pmap(_replicate_block, [(spec, a, b) for a, b in blocks], workers))
    by_method = {m: est[:, e] for e, m in enumerate(spec.estimators)}
    summaries = {m: _summarize(v, theta) for m, v in by_method.items()}
    wins = {}
    if Method.MEAN in by_method:
        base = np.abs(by_method[Method.MEAN] - theta)
        for m, v in by_method.items():
            if m is not Method.MEAN:
                wins[m] = int(np.sum(np.abs(v - theta) < base))
    return SimulationReport(theta, spec.replications, summaries, wins, by_method)
