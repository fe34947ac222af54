"""Gauss-Legendre tensor-product quadrature on unit cubes and the 2-simplex.

Integrands receive one flat coordinate array per axis (every tensor node)
and return either a same-length array or a batched :class:`Jet2`, in which
case integration acts coefficient-wise.  Node batches are chunked so that
high orders in four dimensions stay within memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import numpy as np

from .jets import Jet2

_CHUNK = 1 << 19  # max nodes per integrand call


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes/weights mapped to (0, 1); weights sum to 1."""

    points_per_axis: int
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def gauss_legendre(cls, n: int) -> "QuadratureRule":
        if n < 1:
            raise ValueError("need at least one quadrature point")
        return _gl_rule(int(n))


@lru_cache(maxsize=32)
def _gl_rule(n: int) -> QuadratureRule:
    x, w = np.polynomial.legendre.leggauss(n)
    nodes = (x + 1.0) / 2.0
    weights = w / 2.0
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(n, nodes, weights)


def _check_finite(vals, coords, chunk_start):
    arr = vals.coeffs if isinstance(vals, Jet2) else np.asarray(vals)
    if np.all(np.isfinite(arr)):
        return
    if isinstance(vals, Jet2):
        bad = np.nonzero(~np.isfinite(arr).all(axis=tuple(range(arr.ndim - 1))))[0]
    else:
        bad = np.nonzero(~np.isfinite(arr))[0]
    k = int(bad[0])
    node = tuple(float(c[k]) for c in coords)
    raise FloatingPointError(
        f"integrand returned a non-finite value at node {node} "
        f"(flat index {chunk_start + k})"
    )


def _accumulate(f, axes_nodes, axes_weights):
    """Weighted sum of f over the tensor grid, chunked along the flat batch."""
    grids = np.meshgrid(*axes_nodes, indexing="ij")
    coords = [g.ravel() for g in grids]
    wgrids = np.meshgrid(*axes_weights, indexing="ij")
    weights = np.ones_like(coords[0])
    for wg in wgrids:
        weights = weights * wg.ravel()
    total = None
    n = coords[0].size
    for start in range(0, n, _CHUNK):
        sl = slice(start, min(start + _CHUNK, n))
        vals = f(*(c[sl] for c in coords))
        _check_finite(vals, [c[sl] for c in coords], start)
        w = weights[sl]
        if isinstance(vals, Jet2):
            part = vals.coeffs @ w
        else:
            part = np.asarray(vals) @ w
        total = part if total is None else total + part
    if total is None:
        raise ValueError("empty quadrature grid")
    if isinstance(total, np.ndarray) and total.ndim >= 2:
        return Jet2(total)
    return float(total)


def integrate_cube(f, d: int, rule: QuadratureRule):
    """Integrate f over the open unit cube [0,1]^d, d in 1..4."""
    if not 1 <= d <= 4:
        raise ValueError("dimension must be between 1 and 4")
    return _accumulate(f, [rule.nodes] * d, [rule.weights] * d)


def integrate_simplex2(f, rule: QuadratureRule, extra_dims: int = 0):
    """Integrate f(a, b, *rest) over {a, b >= 0, a + b <= 1} x [0,1]^extra_dims.

    The simplex is mapped to the unit square by b = (1-a)t with Jacobian
    (1-a); ``rest`` are plain cube axes appended after (a, b).
    """
    if extra_dims < 0 or extra_dims > 2:
        raise ValueError("extra_dims must be 0, 1, or 2")

    def g(a, t, *rest):
        b = (1.0 - a) * t
        vals = f(a, b, *rest)
        jac = 1.0 - a
        if isinstance(vals, Jet2):
            return Jet2(vals.coeffs * jac)
        return np.asarray(vals) * jac

    return _accumulate(g, [rule.nodes] * (2 + extra_dims), [rule.weights] * (2 + extra_dims))


DEFAULT_ORDER_LADDER = (12, 24, 48)


def converge(f, domain: str, tol: float, orders=DEFAULT_ORDER_LADDER, extra_dims: int = 0, d: int = 1):
    """Evaluate at increasing orders until successive values agree.

    ``domain`` is ``"cube"`` (use ``d``) or ``"simplex2"`` (use
    ``extra_dims``).  Returns ``(value, error_estimate)`` where the
    estimate is the difference between the last two evaluations.  Raises
    if the ladder is exhausted without reaching ``tol``.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if domain not in ("cube", "simplex2"):
        raise ValueError(f"unknown domain {domain!r}")

    prev = None
    prev_err = None
    for order in orders:
        rule = QuadratureRule.gauss_legendre(order)
        if domain == "cube":
            val = integrate_cube(f, d, rule)
        else:
            val = integrate_simplex2(f, rule, extra_dims=extra_dims)
        if prev is not None:
            err = _difference(val, prev)
            scale = max(_magnitude(val), 1e-300)
            if err <= tol * scale:
                return val, err
            prev_err = err
        prev = val
    raise RuntimeError(
        f"quadrature did not converge to {tol:g} by order {orders[-1]} "
        f"(last change {prev_err!r}); integrand may be singular"
    )


def _difference(a, b):
    if isinstance(a, Jet2):
        return float(np.max(np.abs(a.coeffs - b.coeffs)))
    return abs(a - b)


def _magnitude(a):
    if isinstance(a, Jet2):
        return float(np.max(np.abs(a.coeffs)))
    return abs(a)
