"""End-to-end acceptance criteria.

Each ``test_acNN_*`` function checks criterion NN; the terminal summary
(see conftest.py) prints one PASS/FAIL line per criterion.  Run with

    python3 -m pytest tests/test_acceptance.py -v
"""
import math
import subprocess
import sys

import numpy as np
import pytest
from scipy import integrate, stats

from bmm import (
    SHIPPED_SPECS,
    DensitySpec,
    DistributionSpec,
    EstimatorConfig,
    Method,
    RngStream,
    cdf_y,
    conditional_moments,
    density_y,
    enumerate_fib_permutations,
    fib_oracle,
    is_estimate_fib,
    resampled_means,
    sample_fib_weights,
    sample_symmetric_dirichlet,
)
from bmm.bootstrap_ci import CIConfig, ci_bmm, coverage_experiment
from bmm.bounds_diagnostics import (
    bmm_large_t_bound,
    concentration_experiment,
    median_clt_check,
    median_gap_experiment,
    mse_identity_experiment,
)
from bmm.dirichlet_mean_analytics import unconditional_variance
from bmm.harness import SimulationSpec, run_simulation

pytestmark = pytest.mark.acceptance


def ks_crit_1pct(n):
    return 1.628 / math.sqrt(n)


# 1 -------------------------------------------------------------------------

EXPO_GRID = np.linspace(1.25, 2.0, 10)


@pytest.fixture(scope="module")
def expo_is_reports():
    reports = []
    for k, inv_lam in enumerate(EXPO_GRID):
        spec = SimulationSpec(DistributionSpec("expo_is", (1.0 / float(inv_lam),)), 1000, ("mean", "bmm", "abmm"),
                              EstimatorConfig(1.0, 1000, 0), replications=1000, seed=100 + k)
        reports.append(run_simulation(spec))
    return reports


def test_ac01_expo_is_mse(expo_is_reports):
    wins = 0
    for inv_lam, rep in zip(EXPO_GRID, expo_is_reports):
        s = rep.summaries
        ok = s[Method.BMM].mse < s[Method.MEAN].mse and s[Method.ABMM].mse < s[Method.MEAN].mse
        wins += ok
        if inv_lam >= 1.5:
            assert ok, f"1/lambda={inv_lam:.4g}"
    assert wins >= 8


def test_ac01_expo_is_bias(expo_is_reports):
    for inv_lam, rep in zip(EXPO_GRID, expo_is_reports):
        s = rep.summaries
        assert abs(s[Method.MEAN].bias) < abs(s[Method.BMM].bias), f"1/lambda={inv_lam:.4g}"


# 2 -------------------------------------------------------------------------


def closed_form_moments(x, alpha):
    # power-sum form of E[Y^m | x] for m = 1, 2, 3
    A = x.size * alpha
    p1, p2, p3 = x.sum(), (x**2).sum(), (x**3).sum()
    m1 = p1 / x.size
    m2 = (alpha**2 * p1**2 + alpha * p2) / (A * (A + 1))
    m3 = (alpha**3 * p1**3 + 3 * alpha**2 * p1 * p2 + 2 * alpha * p3) / (A * (A + 1) * (A + 2))
    return m1, m2, m3


def test_ac02_recursion_vs_closed_forms():
    rng = np.random.default_rng(2)
    for _ in range(100):
        x = rng.standard_normal(rng.integers(2, 30)) * rng.uniform(0.1, 10) + rng.uniform(-5, 5)
        for alpha in (0.1, 1.0, 4.0):
            rec = conditional_moments(x, alpha, 3)
            for r, c in zip(rec[1:], closed_form_moments(x, alpha)):
                assert abs(r - c) <= 1e-10 * max(abs(c), 1e-300)


def test_ac02_recursion_vs_monte_carlo():
    x = np.array([-1.0, 0.2, 0.5, 2.0, 3.5])
    for alpha in (0.1, 1.0, 4.0):
        y = resampled_means(x, alpha, 10**6, seed=21)
        rec = conditional_moments(x, alpha, 4)
        for m in range(1, 5):
            v = y**m
            se = v.std(ddof=1) / math.sqrt(v.size)
            assert abs(v.mean() - rec[m]) < 4 * se, (alpha, m)


# 3 -------------------------------------------------------------------------


def test_ac03_unconditional_variance():
    n, alpha, draws = 20, 1.0, 10**5
    rng = RngStream(3).generator()
    x = rng.standard_normal((draws, n))
    p = sample_symmetric_dirichlet(n, alpha, RngStream(3, 1), size=draws)
    y = np.einsum("ij,ij->i", p, x)
    target = unconditional_variance(1.0, n, alpha)
    assert target == pytest.approx(1 / n * n * (alpha + 1) / (n * alpha + 1))
    assert abs(y.var() / target - 1) < 0.05


# 4 -------------------------------------------------------------------------


def test_ac04_beta_closure():
    n, alpha, draws = 50, 5.0, 10**4
    x = RngStream(4).generator().beta(2, 3, size=(draws, n))
    p = sample_symmetric_dirichlet(n, alpha, RngStream(4, 1), size=draws)
    y = np.einsum("ij,ij->i", p, x)
    law = stats.beta(100, 150)
    assert stats.kstest(y, law.cdf).statistic < ks_crit_1pct(draws)
    approx_median = (100 - 1 / 3) / (250 - 2 / 3)
    se = 1 / (2 * law.pdf(law.median()) * math.sqrt(draws))
    assert abs(np.median(y) - approx_median) < 3 * se


# 5 -------------------------------------------------------------------------

GRID11 = np.linspace(0, 1, 13)[1:-1]


def test_ac05_arcsine_density():
    spec = DensitySpec([0.0, 1.0], 0.5)
    for y in GRID11:
        exact = 1 / (math.pi * math.sqrt(y * (1 - y)))
        assert abs(density_y(spec, y) - exact) <= 1e-10 * exact


@pytest.mark.parametrize("x", [[0.0, 1.0], [0.0, 0.3, 1.0]])
def test_ac05_real_integral_branch(x):
    spec = DensitySpec(x, 0.75)
    atoms = np.unique(x)
    total = sum(integrate.quad(lambda y: density_y(spec, y), a, b, limit=200)[0]
                for a, b in zip(atoms[:-1], atoms[1:]))
    assert abs(total - 1) <= 1e-3
    y = resampled_means(x, 0.75, 10**6, seed=5)
    for q in GRID11:
        emp = np.mean(y <= q)
        se = math.sqrt(emp * (1 - emp) / y.size)
        assert abs(cdf_y(spec, q) - emp) < 3 * se, q


# 6 -------------------------------------------------------------------------


def test_ac06_median_clt_and_scaling():
    reports = {J: median_clt_check([0.0, 1.0], 0.5, J, 10**4, seed=6) for J in (1000, 4000)}
    for J, r in reports.items():
        assert r.bound_value == pytest.approx(1 / (4 * J * (2 / math.pi) ** 2))
        assert abs(r.empirical_value / r.bound_value - 1) < 0.10, J
    ratio = reports[1000].empirical_value / reports[4000].empirical_value
    assert abs(ratio / 4 - 1) < 0.15


# 7 -------------------------------------------------------------------------


def test_ac07_small_t_concentration():
    reps = concentration_experiment([0.0, 1.0], 1.0, 500, [0.02, 0.05, 0.1], 10**4, seed=7, C=1.0, m=0.5)
    for r in reps:
        assert r.empirical_value <= r.bound_value, r.label


def test_ac07_large_t_concentration():
    (r,) = concentration_experiment([0.0, 1.0], 1.0, 10, [0.8], 10**4, seed=8, regime="large", m=0.5)
    assert r.bound_value == pytest.approx(bmm_large_t_bound(10, 0.8, 1 / 12))
    assert r.empirical_value <= r.bound_value


# 8 -------------------------------------------------------------------------

GAP_DISTS = [("normal(0,1)", 3), ("lognormal(0,1)", 5), ("pareto(0,1,2.5)", 8), ("beta(2,3)", 12),
             ("expo(1,0)", 15)]


def test_ac08_conditional_median_gap():
    # 5 laws x 200 samples = 10^3 samples, each at three concentrations
    for k, (dist, n) in enumerate(GAP_DISTS):
        excess = median_gap_experiment(dist, n, [0.1, 1.0, 10.0], 200, seed=80 + k, mc_draws=2 * 10**4)
        assert excess.shape == (200, 3)
        assert np.all(excess <= 0), (dist, float(excess.max()))


@pytest.mark.parametrize("text", SHIPPED_SPECS)
def test_ac08_mean_median_within_sigma(text):
    d = DistributionSpec.parse(text)
    assert abs(d.median() - d.true_mean()) <= math.sqrt(d.variance())


# 9 -------------------------------------------------------------------------


@pytest.mark.parametrize("dist", ["normal(0,1)", "pareto(0,1,2.5)"])
def test_ac09_mse_identity(dist):
    r = mse_identity_experiment(dist, 50, 1.0, trials=10**4, seed=9)
    assert abs(r.identity_residual) < 4 * r.residual_se


# 10 ------------------------------------------------------------------------


@pytest.mark.parametrize("dist", ["expo(0.3333333333333333,5)", "pareto(0,10,4)", "normal(0,1)"])
def test_ac10_coverage(dist):
    rep = coverage_experiment(dist, 100, CIConfig(0.05, 1000), n_draws=1000, seed=10)
    assert 0.92 <= rep.empirical <= 0.98, rep


def test_ac10_fixed_vs_unfixed():
    shifts = []
    for d in range(100):
        x = DistributionSpec.parse("normal(0,1)").sample(100, RngStream(11, d))
        a = ci_bmm(x, CIConfig(0.05, 1000, seed=d))
        b = ci_bmm(x, CIConfig(0.05, 1000, seed=d, fix_dirichlet_draws=False))
        width = a.upper - a.lower
        shifts += [abs(a.lower - b.lower) / width, abs(a.upper - b.upper) / width]
    assert np.median(shifts) < 0.10


# 11 ------------------------------------------------------------------------


def test_ac11_fibonacci_oracle():
    assert fib_oracle(7) == 21
    for m in range(1, 15):
        assert enumerate_fib_permutations(m) == fib_oracle(m)


def test_ac11_fibonacci_weights():
    w = sample_fib_weights(20, 10**5, seed=11)
    se = w.std(ddof=1) / math.sqrt(w.size)
    assert abs(w.mean() - 10946) < 3 * se


def test_ac11_bmm_beats_mean_at_m80():
    truth = fib_oracle(80)
    err = {"mean": [], "bmm": []}
    for r in range(200):
        cfg = EstimatorConfig(1.0, None, r)
        for agg in err:
            err[agg].append(is_estimate_fib(80, 1000, agg, cfg, seed=r).estimate / truth - 1)
    mse = {k: float(np.mean(np.square(v))) for k, v in err.items()}
    assert mse["bmm"] < mse["mean"], mse


# 12 ------------------------------------------------------------------------


def panel(dist, methods, seed):
    spec = SimulationSpec(dist, 1000, methods, EstimatorConfig(1.0, 1000, 0), replications=1000, seed=seed, g=3)
    return run_simulation(spec).summaries


def test_ac12_a_skewnormal():
    s = panel("skewnormal(0,1000,0)", ("mean", "median", "bmm", "abmm"), 121)
    mean = s[Method.MEAN].mse
    assert abs(s[Method.BMM].mse / mean - 1) < 0.10
    assert abs(s[Method.ABMM].mse / mean - 1) < 0.10
    assert s[Method.MEDIAN].mse > 1.3 * mean


def test_ac12_b_pareto():
    s = panel("pareto(0,1000,2.5)", ("mean", "bmm", "mm"), 122)
    assert s[Method.BMM].mse < s[Method.MEAN].mse
    assert s[Method.MM].mse > s[Method.BMM].mse


def test_ac12_c_lognormal():
    s = panel("lognormal(4,1)", ("mean", "median"), 123)
    assert abs(s[Method.MEDIAN].bias ** 2 / 1254 - 1) < 0.15


# 13 ------------------------------------------------------------------------


def cli(*args):
    out = subprocess.run([sys.executable, "-m", "bmm", *args], capture_output=True, check=True)
    return out.stdout


@pytest.mark.parametrize("args", [
    ("simulate", "--dist", "pareto(0,1000,2.5)", "--n", "200", "--reps", "40", "--seed", "13"),
    ("simulate", "--experiment", "bounds", "--dist", "normal(0,1)", "--n", "30", "--reps", "60", "--seed", "13"),
    ("fib", "--m", "40", "--draws", "500", "--aggregator", "bmm", "--seed", "13"),
    ("density", "--values", "0,1,3", "--alpha", "0.5", "--grid", "15"),
])
def test_ac13_cli_deterministic(args):
    first = cli(*args)
    assert first and cli(*args) == first
    if args[0] == "simulate":
        assert cli(*args, "--workers", "2") == first


def test_ac13_cli_stdin_deterministic(tmp_path):
    f = tmp_path / "x.txt"
    f.write_text("\n".join(str(v) for v in np.random.default_rng(13).lognormal(size=60)))
    for args in (("estimate", "--method", "bmm"), ("ci", "--B", "300"), ("ci", "--B", "100", "--unfixed")):
        full = (*args, "--input", str(f), "--seed", "13")
        assert cli(*full) == cli(*full)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
