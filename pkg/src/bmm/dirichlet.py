"""Symmetric Dirichlet weights and reproducible random substreams.

Every random quantity in the package is drawn from a generator obtained
through :func:`derive_substream`, so results depend only on integer seeds
and never on global state or on how work is split across processes.
"""
from dataclasses import dataclass

import numpy as np

from ._validate import as_sample, check_count, check_positive, check_seed
from .errors import NumericalError, ShapeError

_MAX_RESAMPLES = 100
_SIMPLEX_DRIFT = 1e-12


@dataclass(frozen=True)
class RngStream:
    """Handle on an independent, reproducible random stream.

    Two handles with the same ``(seed, stream_index)`` produce identical
    draws; distinct pairs give statistically independent streams (numpy's
    ``SeedSequence`` spawn-key mechanism).
    """

    seed: int
    stream_index: int = 0

    def generator(self):
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(ss))


def derive_substream(seed, index):
    """Return the stream keyed by ``(seed, index)``."""
    return RngStream(check_seed(seed), check_seed(index))


def child_seed(seed, *keys):
    """Derive a new 64-bit seed from ``seed`` and a path of integer keys."""
    ss = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _as_generator(stream):
    if isinstance(stream, np.random.Generator):
        return stream
    return stream.generator()


def _fix_simplex(p):
    # push rounding drift into the largest coordinate so the row sums to 1
    # without any coordinate going negative
    drift = 1.0 - p.sum(axis=1)
    small = np.abs(drift) < _SIMPLEX_DRIFT
    if np.any(small):
        rows = np.nonzero(small)[0]
        cols = np.argmax(p[rows], axis=1)
        p[rows, cols] += drift[rows]
    return p


def _gamma_rows(rng, alpha, rows, n):
    if alpha >= 1.0:
        g = rng.standard_gamma(alpha, size=(rows, n))
        total = g.sum(axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            return g / total
    # G_a = G_{a+1} * U**(1/a), kept in log space: at tiny alpha the gamma
    # variates underflow long before their ratios do
    log_g = np.log(rng.standard_gamma(alpha + 1.0, size=(rows, n)))
    log_g += np.log1p(-rng.random(size=(rows, n))) / alpha
    log_g -= log_g.max(axis=1, keepdims=True)
    g = np.exp(log_g)
    return g / g.sum(axis=1, keepdims=True)


def _spacing_rows(rng, rows, n):
    u = np.sort(rng.random(size=(rows, n - 1)), axis=1)
    p = np.empty((rows, n))
    p[:, 0] = u[:, 0]
    p[:, 1:-1] = np.diff(u, axis=1)
    p[:, -1] = 1.0 - u[:, -1]
    return p


def _bad_rows(p):
    return ~np.all(np.isfinite(p), axis=1) | (p.sum(axis=1) <= 0.0)


def _gamma_dirichlet(rng, alpha, rows, n):
    p = _gamma_rows(rng, alpha, rows, n)
    bad = _bad_rows(p)
    attempts = 0
    while np.any(bad):
        attempts += 1
        if attempts > _MAX_RESAMPLES:
            raise NumericalError(
                f"Dirichlet draw with alpha={alpha} degenerate after {_MAX_RESAMPLES} resamples"
            )
        k = np.nonzero(bad)[0]
        p[k] = _gamma_rows(rng, alpha, k.size, n)
        bad = _bad_rows(p)
    return _fix_simplex(p)


def dirichlet_rows(n, alpha, rng, rows):
    """Draw a (rows, n) matrix of Dir_n(alpha, ..., alpha) vectors.

    ``alpha == 1`` uses ordered uniform spacings; otherwise normalized
    gamma variates.
    """
    if n == 1:
        return np.ones((rows, 1))
    if alpha == 1.0:
        return _fix_simplex(_spacing_rows(rng, rows, n))
    return _gamma_dirichlet(rng, alpha, rows, n)


def sample_symmetric_dirichlet(n, alpha, stream, size=None):
    """Draw from the symmetric Dirichlet via normalized Gamma(alpha, 1) variates.

    Parameters
    ----------
    n : int
        Dimension of the simplex.
    alpha : float
        Concentration, > 0.  For ``alpha < 1`` the gamma variates are built
        in log space from ``G(alpha + 1) * U**(1/alpha)``.
    stream : RngStream or numpy.random.Generator
    size : int, optional
        Number of vectors.  ``None`` returns a single vector of shape (n,).

    Returns
    -------
    ndarray
        Shape (n,) or (size, n); every row is nonnegative and sums to 1.
    """
    n = check_count(n, "n")
    alpha = check_positive(alpha, "alpha")
    rng = _as_generator(stream)
    rows = 1 if size is None else check_count(size, "size")
    p = np.ones((rows, 1)) if n == 1 else _gamma_dirichlet(rng, alpha, rows, n)
    return p[0] if size is None else p


def sample_dirichlet_uniform_fast(n, stream, size=None):
    """Draw from Dir_n(1, ..., 1) as spacings of n - 1 sorted uniforms."""
    n = check_count(n, "n")
    rng = _as_generator(stream)
    rows = 1 if size is None else check_count(size, "size")
    p = np.ones((rows, 1)) if n == 1 else _fix_simplex(_spacing_rows(rng, rows, n))
    return p[0] if size is None else p


def weighted_mean(weights, sample):
    """Inner product of one weight vector with the sample."""
    w = np.asarray(weights, dtype=np.float64)
    x = as_sample(sample)
    if w.shape != x.shape:
        raise ShapeError(f"weights have shape {w.shape}, sample has shape {x.shape}")
    return float(w @ x)
