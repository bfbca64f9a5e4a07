"""Importance-sampling workloads with heavy-tailed unbiased terms.

Two examples are provided.  The first estimates 1/lambda from Expo(1)
proposals.  The second counts Fibonacci permutations, where element i may
only occupy positions i-1, i or i+1, with a sequential proposal.

Fibonacci proposal
------------------
Objects are placed in order.  Object ``i`` is placed uniformly at random in
one of its free positions.  Positions ``< i`` are always full by then, so
the choice is between ``i`` and ``i + 1``.  The last object has only its
own position left.  When object ``i`` takes position ``i + 1``, object
``i + 1`` is forced into position ``i`` and its turn is skipped.  The
importance weight is the product of the number of choices at each turn,
``2**k``, where ``k`` is the number of two-way turns.  A draw is driven by
one uniform per object: ``u[i] >= 1/2`` sends object ``i`` to ``i + 1``.
"""
import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._validate import check_count, check_positive, check_seed
from .core_estimators import EstimateReport, EstimatorConfig, Method, abmm, bmm, median_of_means
from .dirichlet import RngStream, _as_generator, child_seed, derive_substream
from .distributions import DistributionSpec
from .errors import BudgetError, ConfigError

MAX_ENUMERATION_M = 14
_CHUNK_CELLS = 4_000_000


class Aggregator(str, enum.Enum):
    MEAN = "mean"
    BMM = "bmm"
    ABMM = "abmm"
    MM = "mm"


@dataclass(frozen=True)
class FibDraw:
    """One proposal draw: ``permutation[pos]`` is the object at ``pos``."""

    permutation: np.ndarray
    weight: int


def fib_oracle(m):
    """Number of Fibonacci permutations of m objects, Fib(m + 1), as an exact int."""
    m = check_count(m, "m")
    prev, cur = 1, 1  # P_0, P_1
    for _ in range(m - 1):
        prev, cur = cur, prev + cur
    return cur


def enumerate_fib_permutations(m):
    """Count Fibonacci permutations of m objects by exhaustive backtracking.

    Raises BudgetError for m > 14.
    """
    m = check_count(m, "m")
    if m > MAX_ENUMERATION_M:
        raise BudgetError(f"enumeration limited to m <= {MAX_ENUMERATION_M}, got {m}")
    taken = [False] * m

    def place(i):
        if i == m:
            return 1
        count = 0
        for pos in (i - 1, i, i + 1):
            if 0 <= pos < m and not taken[pos]:
                taken[pos] = True
                count += place(i + 1)
                taken[pos] = False
        return count

    return place(0)


def is_fibonacci_permutation(perm):
    perm = np.asarray(perm)
    m = perm.size
    if sorted(perm.tolist()) != list(range(m)):
        return False
    return bool(np.all(np.abs(perm - np.arange(m)) <= 1))


def _fib_from_uniforms(u):
    m = u.size
    perm = np.full(m, -1, dtype=np.int64)
    if m == 1:
        perm[0] = 0
        return perm, 1
    weight = 1
    i = 0
    while i < m:
        if i == 0:
            avail = [0, 1]
        elif i == m - 1:
            avail = [x for x in (m - 2, m - 1) if perm[x] == -1]
        else:
            avail = [x for x in (i - 1, i, i + 1) if perm[x] == -1]
        weight *= len(avail)
        chosen = avail[-1] if (len(avail) == 2 and u[i] >= 0.5) else avail[0]
        perm[chosen] = i
        if chosen != i:
            # object i + 1 is forced into position i
            perm[i] = chosen
            i += 1
        i += 1
    return perm, weight


def sample_fib_permutation(m, stream):
    """Draw one permutation from the sequential proposal with its weight."""
    m = check_count(m, "m")
    u = _as_generator(stream).random(m)
    perm, weight = _fib_from_uniforms(u)
    return FibDraw(perm, weight)


def sample_fib_weights(m, n_draws, seed=0):
    """``n_draws`` importance weights 2**k as float64.

    Drawn in chunks; chunk ``c`` uses substream ``(seed, c)``.
    """
    m = check_count(m, "m")
    n_draws = check_count(n_draws, "n_draws")
    seed = check_seed(seed)
    rows = max(1, _CHUNK_CELLS // m)
    out = np.empty(n_draws)
    for c, start in enumerate(range(0, n_draws, rows)):
        stop = min(start + rows, n_draws)
        u = derive_substream(seed, c).generator().random((stop - start, m))
        out[start:stop] = np.ldexp(1.0, _kernels.fib_exponents(u))
    return out


def aggregate(values, aggregator, config=None, g=3):
    """Combine unbiased terms with one of the Aggregator methods."""
    aggregator = Aggregator(aggregator)
    config = config or EstimatorConfig()
    if aggregator is Aggregator.MEAN:
        return float(np.mean(values))
    if aggregator is Aggregator.BMM:
        return bmm(values, config).estimate
    if aggregator is Aggregator.ABMM:
        return abmm(values, config.alpha)
    return median_of_means(values, min(g, len(values)))


def is_estimate_fib(m, n_draws, aggregator="mean", config=None, seed=0, g=3):
    """Estimate the number of Fibonacci permutations from ``n_draws`` weights.

    The weights come from ``child_seed(seed, 0)``; BMM resampling (if any)
    uses ``config.seed``.
    """
    config = config or EstimatorConfig()
    w = sample_fib_weights(m, n_draws, child_seed(seed, 0))
    value = aggregate(w, aggregator, config, g)
    return EstimateReport(value, Method(Aggregator(aggregator).value), config)


def expo_is_terms(lam, n, stream):
    """n terms lam X exp(-(lam - 1) X), X ~ Expo(1); each has mean 1/lam."""
    lam = check_positive(lam, "lambda")
    n = check_count(n, "n")
    if not isinstance(stream, (RngStream, np.random.Generator)):
        raise ConfigError("stream must be an RngStream or a numpy Generator")
    return DistributionSpec("expo_is", (lam,)).sample(n, stream)
