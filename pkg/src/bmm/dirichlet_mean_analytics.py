"""Distribution of the Dirichlet mean Y = sum_i p_i x_i with the sample fixed.

Moments come from an exact recursion.  The density has two real-valued
representations that are implemented here: a closed form when
``alpha == 1/n`` and a one-dimensional integral when ``1/n < alpha < 1``.
Other concentrations fall back to simulation wherever a consumer needs a
number (the conditional median).

Both real representations integrate functions with algebraic endpoint
singularities at the atoms, ``|x_i - s|**(-alpha)``, and at ``s = y``.  Each
gap between consecutive atoms is handed to QUADPACK's algebraic-weight rule
(QAWS), which absorbs the endpoint powers exactly.
"""
import enum
import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize
from scipy.special import gammaln

from ._validate import as_sample, check_count, check_positive, check_seed
from .core_estimators import resampled_means, summary_stats
from .errors import AtomError, QuadratureError, UnsupportedAlphaError, UnsupportedOrderError

MAX_MOMENT_ORDER = 12
_ONE_OVER_N_TOL = 1e-12


class DensityBranch(str, enum.Enum):
    CLOSED_FORM = "closed_form_alpha_equals_one_over_n"
    REAL_INTEGRAL = "real_integral"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-8
    max_subdivisions: int = 10_000
    # half-width, relative to the sample range, inside which y counts as an atom
    singularity_clip: float = 1e-10

    def __post_init__(self):
        check_positive(self.abs_tol, "abs_tol")
        check_count(self.max_subdivisions, "max_subdivisions")
        check_positive(self.singularity_clip, "singularity_clip")


@dataclass(frozen=True, eq=False)
class DensitySpec:
    """A fixed sample (the atoms) and a Dirichlet concentration."""

    sample: np.ndarray
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "sample", as_sample(self.sample))
        object.__setattr__(self, "alpha", check_positive(self.alpha, "alpha"))

    @functools.cached_property
    def _atoms(self):
        # distinct atoms rescaled to [0, 1], with multiplicity-weighted exponents
        x = self.sample
        lo, hi = float(x.min()), float(x.max())
        scale = hi - lo
        values, counts = np.unique(x, return_counts=True)
        u = (values - lo) / scale if scale > 0 else np.zeros(1)
        return lo, scale, u, self.alpha * counts.astype(np.float64)

    @property
    def n(self):
        return self.sample.size

    @property
    def branch(self):
        n, a = self.n, self.alpha
        lo, scale, _, w = self._atoms
        if scale == 0.0:
            return DensityBranch.UNSUPPORTED
        if abs(a - 1.0 / n) < _ONE_OVER_N_TOL:
            return DensityBranch.CLOSED_FORM
        # tied atoms act as one atom of weight mult * alpha; the integral
        # representation needs every weight below 1
        if 1.0 / n < a < 1.0 and w.max() < 1.0:
            return DensityBranch.REAL_INTEGRAL
        return DensityBranch.UNSUPPORTED


def conditional_moments(sample, alpha, m_max):
    """E[Y^k | sample] for k = 0..m_max via the moment recursion.

    E[Y^m] = sum_{k<m} G(na+k)/G(na+m) * (m-1)!/k! * E[Y^k] * alpha * sum_i x_i^(m-k),
    with the factorial ratios taken in log-gamma space.
    """
    x = as_sample(sample)
    alpha = check_positive(alpha, "alpha")
    if isinstance(m_max, bool) or int(m_max) != m_max or m_max < 0:
        raise UnsupportedOrderError(f"moment order must be a nonnegative integer, got {m_max!r}")
    m_max = int(m_max)
    if m_max > MAX_MOMENT_ORDER:
        raise UnsupportedOrderError(f"moment order {m_max} exceeds {MAX_MOMENT_ORDER}")
    na = x.size * alpha
    power_sums = np.array([alpha * np.sum(x**j) for j in range(m_max + 1)])
    mom = np.zeros(m_max + 1)
    mom[0] = 1.0
    for m in range(1, m_max + 1):
        k = np.arange(m)
        log_coef = gammaln(na + k) - gammaln(na + m) + gammaln(m) - gammaln(k + 1)
        mom[m] = np.sum(np.exp(log_coef) * mom[:m] * power_sums[m - k])
    return mom


def conditional_moment(sample, alpha, m):
    """E[Y^m | sample]; ``m = 0`` gives 1."""
    return float(conditional_moments(sample, alpha, m)[m])


def conditional_variance(sample, alpha):
    """V[Y | sample] = s^2 / (n alpha + 1) with the 1/n sample variance."""
    x = as_sample(sample)
    alpha = check_positive(alpha, "alpha")
    return summary_stats(x).variance_biased / (x.size * alpha + 1.0)


def conditional_skewness(sample, alpha):
    """Skewness of Y | sample: 2 sqrt(n alpha + 1) / (n alpha + 2) * skew(sample)."""
    x = as_sample(sample)
    alpha = check_positive(alpha, "alpha")
    na = x.size * alpha
    return 2.0 * math.sqrt(na + 1.0) / (na + 2.0) * summary_stats(x).skewness


def unconditional_variance(sigma2, n, alpha):
    """V[Y] over both the data and the weights: (sigma2/n) n(alpha+1)/(n alpha+1)."""
    if sigma2 < 0:
        raise ValueError("sigma2 must be nonnegative")
    n = check_count(n, "n")
    alpha = check_positive(alpha, "alpha")
    return sigma2 / n * (n * (alpha + 1.0)) / (n * alpha + 1.0)


def _segment_integral(u, w, z, right_power, quad):
    """Integral over [0, z] of (z - s)^right_power * prod |u_i - s|^(-w_i)
    * sin(pi * sum_{u_i <= s} w_i) ds, on the unit-rescaled atoms ``u``.

    An atom sitting at ``z`` (within the clip width) is folded into the
    right-endpoint exponent.
    """
    total = 0.0
    cum = np.cumsum(w)
    at_z = np.nonzero(np.abs(u - z) <= quad.singularity_clip)[0]
    if at_z.size:
        z = u[at_z[0]]
    below = np.nonzero(u < z)[0]
    for k in below:
        s_factor = math.sin(math.pi * cum[k])
        if abs(s_factor) < 1e-15:
            continue
        a = u[k]
        ends_at_atom = k + 1 < u.size and u[k + 1] < z
        keep = np.ones(u.size, dtype=bool)
        keep[k] = False
        if ends_at_atom:
            b = u[k + 1]
            keep[k + 1] = False
            wvar = (-w[k], -w[k + 1])
        else:
            b = z
            right = right_power
            if at_z.size:
                keep[at_z[0]] = False
                right -= w[at_z[0]]
            wvar = (-w[k], right)
        uo, wo = u[keep], w[keep]
        if ends_at_atom:

            def h(s, uo=uo, wo=wo):
                return (z - s) ** right_power * np.exp(-np.dot(wo, np.log(np.abs(uo - s))))

        else:

            def h(s, uo=uo, wo=wo):
                return np.exp(-np.dot(wo, np.log(np.abs(uo - s))))

        res = integrate.quad(
            h, a, b, weight="alg", wvar=wvar, epsabs=quad.abs_tol, epsrel=1e-12,
            limit=quad.max_subdivisions, full_output=1,
        )
        value, abserr = res[0], res[1]
        if len(res) > 3 and abserr > quad.abs_tol * 10:
            raise QuadratureError(f"quadrature on [{a}, {b}] stopped at error {abserr:.3g}: {res[3]}")
        if not np.isfinite(value):
            raise QuadratureError(f"quadrature on [{a}, {b}] returned {value}")
        total += s_factor * value
    return total


def _require_supported(spec):
    branch = spec.branch
    if branch is DensityBranch.UNSUPPORTED:
        raise UnsupportedAlphaError(
            f"no real density formula for alpha={spec.alpha} with n={spec.n} "
            "(needs alpha == 1/n, or 1/n < alpha < 1 without heavily tied atoms)"
        )
    return branch


def density_y(spec, y, quad=None):
    """Density of Y | sample at ``y``.

    Zero outside the convex hull of the sample.  Raises AtomError when ``y``
    sits on an atom and UnsupportedAlphaError when neither real formula
    applies.
    """
    quad = quad or QuadratureConfig()
    branch = _require_supported(spec)
    lo, scale, u, w = spec._atoms
    z = (float(y) - lo) / scale
    if not 0.0 < z < 1.0:
        return 0.0
    if np.min(np.abs(u - z)) <= quad.singularity_clip:
        raise AtomError(f"y={y} coincides with an atom")
    na = spec.n * spec.alpha
    if branch is DensityBranch.CLOSED_FORM:
        cum = np.sum(w[u < z])
        val = math.sin(math.pi * cum) * math.exp(-np.dot(w, np.log(np.abs(u - z)))) / math.pi
    else:
        val = (na - 1.0) / math.pi * _segment_integral(u, w, z, na - 2.0, quad)
    return max(val, 0.0) / scale


def cdf_y(spec, y, quad=None):
    """P[Y <= y | sample].

    Computed as (1/pi) * integral of (y - s)^(n alpha - 1) times the density
    kernel, which is the density integrated once in closed form (order of
    integration swapped); clamped to [0, 1].
    """
    quad = quad or QuadratureConfig()
    _require_supported(spec)
    lo, scale, u, w = spec._atoms
    z = (float(y) - lo) / scale
    if z <= 0.0:
        return 0.0
    if z >= 1.0:
        return 1.0
    na = spec.n * spec.alpha
    val = _segment_integral(u, w, z, na - 1.0, quad) / math.pi
    return min(max(val, 0.0), 1.0)


def conditional_median_mc(sample, alpha, draws=10**6, seed=0):
    """Median of ``draws`` simulated Y and its standard error.

    The standard error is half the width of the order-statistic interval
    at ranks N/2 -+ sqrt(N)/2.
    """
    x = as_sample(sample)
    draws = check_count(draws, "draws")
    if x.min() == x.max():
        return float(x[0]), 0.0
    y = np.sort(resampled_means(x, alpha, draws, check_seed(seed)))
    half = 0.5 * math.sqrt(draws)
    lo_i = max(0, int(math.floor(draws / 2 - half)))
    hi_i = min(draws - 1, int(math.ceil(draws / 2 + half)))
    return float(np.median(y)), float(0.5 * (y[hi_i] - y[lo_i]))


def conditional_median(sample, alpha, quad=None, mc_draws=10**6, seed=0):
    """Population median of Y | sample.

    Root of the exact CDF at 1/2 (Brent's bracketing method, xtol 1e-10)
    when a density formula applies, otherwise the Monte-Carlo median of
    ``mc_draws`` simulated Y.
    """
    x = as_sample(sample)
    if x.min() == x.max():
        return float(x[0])
    spec = DensitySpec(x, alpha)
    if spec.branch is DensityBranch.UNSUPPORTED:
        return conditional_median_mc(x, alpha, mc_draws, seed)[0]
    quad = quad or QuadratureConfig()
    lo, hi = float(x.min()), float(x.max())
    eps = 1e-9 * (hi - lo)
    return float(optimize.brentq(lambda t: cdf_y(spec, t, quad) - 0.5, lo + eps, hi - eps, xtol=1e-10))
