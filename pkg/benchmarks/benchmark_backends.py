#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallbacks.

Run after installing the package:

    python benchmarks/benchmark_backends.py [N]

The same comparison can be driven end to end through the environment
flag: CUSPMOLL_BACKEND=numpy forces the fallback lane everywhere.
"""

import sys
import time

import numpy as np

from cuspmoll import _kernels as k


def bench(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    rng = np.random.default_rng(0)
    a = np.zeros(n + 1)
    b = np.zeros(n + 1)
    a[1:] = rng.normal(size=n)
    b[1:] = rng.normal(size=n)
    a[1] = 1.0

    print(f"N = {n}, active backend: {k.backend_name()}")
    rows = []

    if k._USE_NUMBA:
        k._convolve_numba(a[:101], b[:101])  # compile
        k._inverse_numba(a[:101])
        k._weighted_partial_sums_numba(a[:101], b[:101])
        t, fast = bench(k._convolve_numba, a, b)
        rows.append(("dirichlet convolve", "numba", t))
        t, _ = bench(k._inverse_numba, a)
        rows.append(("dirichlet inverse", "numba", t))
        t, _ = bench(k._weighted_partial_sums_numba, a, b)
        rows.append(("weighted partial sums", "numba", t))
    else:
        fast = None

    t, slow = bench(k._convolve_numpy, a, b)
    rows.append(("dirichlet convolve", "numpy", t))
    t, _ = bench(k._inverse_numpy, a)
    rows.append(("dirichlet inverse", "numpy", t))
    t, _ = bench(k._weighted_partial_sums_numpy, a, b)
    rows.append(("weighted partial sums", "numpy", t))

    width = max(len(r[0]) for r in rows)
    for name, lane, t in rows:
        print(f"{name:<{width}}  {lane:<5}  {t * 1e3:9.2f} ms")

    if fast is not None:
        dev = np.max(np.abs(fast - slow))
        print(f"max |numba - numpy| on convolve: {dev:.3e}")


if __name__ == "__main__":
    main()
