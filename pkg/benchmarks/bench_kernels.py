"""Time the numba and numpy kernel backends on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 5]

Both backends receive identical inputs; the script also reports the largest
absolute difference between their outputs.
"""
import argparse
import timeit

import numpy as np

from bmm import _kernels, set_backend
from bmm.dirichlet import dirichlet_rows


def workloads(rng):
    x = rng.standard_normal(1000)
    W = dirichlet_rows(1000, 1.0, rng, 1000)
    xb = rng.standard_normal(100)
    Wb = dirichlet_rows(100, 1.0, rng, 100)
    idx = rng.integers(0, 100, size=(1000, 100))
    u = rng.random((10_000, 80))
    xh = rng.standard_normal(2000)
    return {
        "weighted_means J=n=1000": lambda: _kernels.weighted_means(W, x),
        "bootstrap_medians B=1000 J=n=100": lambda: _kernels.bootstrap_medians(Wb, xb, idx),
        "fib_exponents 10^4 x m=80": lambda: _kernels.fib_exponents(u),
        "pairwise_average_median n=2000": lambda: _kernels.pairwise_average_median(xh),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    jobs = workloads(np.random.default_rng(0))
    print(f"{'kernel':36s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s} {'max diff':>10s}")
    for name, fn in jobs.items():
        times, outs = {}, {}
        for backend in ("numba", "numpy"):
            set_backend(backend)
            outs[backend] = np.asarray(fn())  # also triggers compilation
            times[backend] = min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3
        diff = float(np.max(np.abs(outs["numba"] - outs["numpy"])))
        print(f"{name:36s} {times['numba']:10.2f} {times['numpy']:10.2f} "
              f"{times['numpy'] / times['numba']:8.2f} {diff:10.2e}")
    set_backend("numba")


if __name__ == "__main__":
    main()
