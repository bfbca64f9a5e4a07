"""Hot inner loops, each with a numba and a pure-numpy implementation.

All randomness is drawn by the caller from numpy generators and passed in,
so both backends see identical inputs.  Results agree to rounding (the
numba loops and BLAS accumulate in different orders).
"""
import numpy as np

from . import _accel
from ._accel import njit

# Bootstrap replicates are processed in blocks of this many rows by the numpy
# path to bound the B x J intermediate.
_BOOT_BLOCK = 256


@njit(cache=True, nogil=True, fastmath=True)
def _weighted_means_nb(W, x):
    J, n = W.shape
    out = np.empty(J)
    for j in range(J):
        s = 0.0
        for i in range(n):
            s += W[j, i] * x[i]
        out[j] = s
    return out


def _weighted_means_np(W, x):
    return W @ x


@njit(cache=True, nogil=True, fastmath=True)
def _bootstrap_medians_nb(W, x, idx):
    J, n = W.shape
    B = idx.shape[0]
    out = np.empty(B)
    y = np.empty(J)
    xb = np.empty(n)
    for b in range(B):
        for i in range(n):
            xb[i] = x[idx[b, i]]
        for j in range(J):
            s = 0.0
            for i in range(n):
                s += W[j, i] * xb[i]
            y[j] = s
        out[b] = np.median(y)
    return out


def _bootstrap_medians_np(W, x, idx):
    B = idx.shape[0]
    out = np.empty(B)
    for start in range(0, B, _BOOT_BLOCK):
        stop = min(start + _BOOT_BLOCK, B)
        Y = x[idx[start:stop]] @ W.T
        out[start:stop] = np.median(Y, axis=1)
    return out


@njit(cache=True, nogil=True)
def _fib_exponents_nb(u):
    D, m = u.shape
    out = np.zeros(D, dtype=np.int64)
    for d in range(D):
        k = 0
        skip = 0
        # the last object never has a choice; written branch-free since the
        # branch on a fair coin mispredicts half the time
        for i in range(m - 1):
            active = 1 - skip
            k += active
            # object i takes position i + 1, object i + 1 is forced
            skip = active * (u[d, i] >= 0.5)
        out[d] = k
    return out


def _fib_exponents_np(u):
    D, m = u.shape
    k = np.zeros(D, dtype=np.int64)
    skip = np.zeros(D, dtype=bool)
    for i in range(m - 1):
        active = ~skip
        k += active
        skip = active & (u[:, i] >= 0.5)
    return k


@njit(cache=True, nogil=True)
def _pairwise_average_median_nb(x):
    n = x.shape[0]
    buf = np.empty(n * (n - 1) // 2)
    c = 0
    for i in range(n):
        for j in range(i + 1, n):
            buf[c] = 0.5 * (x[i] + x[j])
            c += 1
    return np.median(buf)


def _pairwise_average_median_np(x):
    i, j = np.triu_indices(x.shape[0], 1)
    return float(np.median(0.5 * (x[i] + x[j])))


_IMPLS = {
    "weighted_means": (_weighted_means_nb, _weighted_means_np),
    "bootstrap_medians": (_bootstrap_medians_nb, _bootstrap_medians_np),
    "fib_exponents": (_fib_exponents_nb, _fib_exponents_np),
    "pairwise_average_median": (_pairwise_average_median_nb, _pairwise_average_median_np),
}


def _impl(name):
    nb, np_ = _IMPLS[name]
    return nb if _accel.get_backend() == "numba" else np_


def weighted_means(W, x):
    """Row-wise inner products ``W @ x`` for a (J, n) weight matrix."""
    W = np.ascontiguousarray(W, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    return _impl("weighted_means")(W, x)


def bootstrap_medians(W, x, idx):
    """For each row ``b`` of ``idx``, median over j of ``W[j] @ x[idx[b]]``."""
    W = np.ascontiguousarray(W, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    return _impl("bootstrap_medians")(W, x, idx)


def fib_exponents(u):
    """Number of two-way choices made by each sequential Fibonacci draw.

    ``u`` has shape (draws, m); ``u[d, i]`` drives the placement of object
    ``i`` in draw ``d``.  The importance weight of a draw is ``2**k``.
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    if u.shape[1] == 0:
        return np.zeros(u.shape[0], dtype=np.int64)
    return _impl("fib_exponents")(u)


def pairwise_average_median(x):
    """Median of ``(x[i] + x[j]) / 2`` over all pairs ``i < j``."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    return float(_impl("pairwise_average_median")(x))
