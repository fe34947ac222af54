"""Backend selection for the hot numeric kernels.

Each kernel has a numba ``@njit`` implementation and a pure-numpy
fallback.  The environment variable ``CUSPMOLL_BACKEND`` picks the lane:
``numba`` (default when importable) or ``numpy``.  Both lanes apply
Kahan compensation in the Dirichlet convolution (heavy cancellation in
high-order inverse-series coefficients), so they agree to rounding.
"""

from __future__ import annotations

import os
import numpy as np


def _want_numba() -> bool:
    choice = os.environ.get("CUSPMOLL_BACKEND", "numba").strip().lower()
    if choice not in ("numba", "numpy"):
        raise ValueError(f"CUSPMOLL_BACKEND must be 'numba' or 'numpy', got {choice!r}")
    return choice == "numba"


_USE_NUMBA = False
if _want_numba():
    try:
        import numba  # noqa: F401

        _USE_NUMBA = True
    except ImportError:
        _USE_NUMBA = False


def backend_name() -> str:
    return "numba" if _USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy lane
# ---------------------------------------------------------------------------

def _convolve_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dirichlet convolution with vectorized Kahan compensation.

    Arrays are 1-indexed (index 0 unused).  out[n] = sum_{d|n} a[d] b[n/d].
    """
    n = a.size - 1
    out = np.zeros(n + 1)
    comp = np.zeros(n + 1)
    for d in range(1, n + 1):
        ad = a[d]
        if ad == 0.0:
            continue
        q = n // d
        val = ad * b[1 : q + 1]
        tgt = out[d :: d]
        cmp_ = comp[d :: d]
        y = val - cmp_
        t = tgt + y
        comp[d :: d] = (t - tgt) - y
        out[d :: d] = t
    return out


def _inverse_numpy(a: np.ndarray) -> np.ndarray:
    n = a.size - 1
    inv = np.zeros(n + 1)
    inv[1] = 1.0 / a[1]
    # forward sieve: once inv[m] is final, push inv[m]*a[d] onto acc[m*d]
    acc = np.zeros(n + 1)
    for m in range(1, n + 1):
        if m > 1:
            inv[m] = -acc[m] / a[1]
        if 2 * m <= n:
            q = n // m
            acc[2 * m :: m] += inv[m] * a[2 : q + 1]
    return inv


def _weighted_partial_sums_numpy(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return np.cumsum(values[1:] * weights[1:])


# ---------------------------------------------------------------------------
# numba lane
# ---------------------------------------------------------------------------

if _USE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _convolve_numba(a, b):
        n = a.size - 1
        out = np.zeros(n + 1)
        comp = np.zeros(n + 1)
        for d in range(1, n + 1):
            ad = a[d]
            if ad == 0.0:
                continue
            q = 1
            while d * q <= n:
                idx = d * q
                y = ad * b[q] - comp[idx]
                t = out[idx] + y
                comp[idx] = (t - out[idx]) - y
                out[idx] = t
                q += 1
        return out

    @njit(cache=True)
    def _inverse_numba(a):
        n = a.size - 1
        inv = np.zeros(n + 1)
        acc = np.zeros(n + 1)
        inv[1] = 1.0 / a[1]
        for m in range(1, n + 1):
            if m > 1:
                inv[m] = -acc[m] / a[1]
            d = 2
            while d * m <= n:
                acc[d * m] += inv[m] * a[d]
                d += 1
        return inv

    @njit(cache=True)
    def _weighted_partial_sums_numba(values, weights):
        n = values.size - 1
        out = np.zeros(n)
        total = 0.0
        comp = 0.0
        for i in range(1, n + 1):
            y = values[i] * weights[i] - comp
            t = total + y
            comp = (t - total) - y
            total = t
            out[i - 1] = total
        return out


def dirichlet_convolve_f64(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a*b)[n] = sum_{d|n} a[d] b[n/d] for float64 arrays, 1-indexed."""
    if a.size != b.size:
        raise ValueError("series must share a cutoff")
    if _USE_NUMBA:
        return _convolve_numba(a, b)
    return _convolve_numpy(a, b)


def dirichlet_inverse_f64(a: np.ndarray) -> np.ndarray:
    """Inverse under Dirichlet convolution; requires a[1] != 0."""
    if a[1] == 0.0:
        raise ZeroDivisionError("series with a[1] = 0 has no Dirichlet inverse")
    if _USE_NUMBA:
        return _inverse_numba(a)
    return _inverse_numpy(a)


def weighted_partial_sums(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Running sums of values[i]*weights[i], i = 1..N (compensated)."""
    if _USE_NUMBA:
        return _weighted_partial_sums_numba(values, weights)
    return _weighted_partial_sums_numpy(values, weights)
