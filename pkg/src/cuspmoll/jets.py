"""Bivariate truncated Taylor expansions (jets) at the origin.

A ``Jet2`` stores the coefficients of a function of two formal variables
(x, y) truncated at fixed orders (m, n): ``coeffs[i, j]`` is the
coefficient of x^i y^j.  Coefficients may be scalars or arrays with a
trailing batch axis, so a single jet can represent the expansion of an
integrand at every quadrature node simultaneously; all operations
broadcast over the batch.

The whole point is the exact extraction of mixed derivatives at the
origin: d^{i+j} f / dx^i dy^j (0,0) = i! j! coeffs[i, j].
"""

from __future__ import annotations

import math
import numpy as np


class Jet2:
    __slots__ = ("coeffs", "order_x", "order_y")

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=float)
        if c.ndim < 2:
            raise ValueError("jet coefficients need at least two axes (orders)")
        self.coeffs = c
        self.order_x = c.shape[0] - 1
        self.order_y = c.shape[1] - 1

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, value, m: int, n: int) -> "Jet2":
        value = np.asarray(value, dtype=float)
        c = np.zeros((m + 1, n + 1) + value.shape)
        c[0, 0] = value
        return cls(c)

    @classmethod
    def affine(cls, x_coeff, y_coeff, const, m: int, n: int) -> "Jet2":
        """Jet of const + x_coeff*x + y_coeff*y at orders (m, n)."""
        x_coeff = np.asarray(x_coeff, dtype=float)
        y_coeff = np.asarray(y_coeff, dtype=float)
        const = np.asarray(const, dtype=float)
        batch = np.broadcast_shapes(x_coeff.shape, y_coeff.shape, const.shape)
        c = np.zeros((m + 1, n + 1) + batch)
        c[0, 0] = const
        if m >= 1:
            c[1, 0] = x_coeff
        if n >= 1:
            c[0, 1] = y_coeff
        return cls(c)

    # -- ring operations ---------------------------------------------------

    def _require_same_orders(self, other: "Jet2") -> None:
        if (self.order_x, self.order_y) != (other.order_x, other.order_y):
            raise ValueError(
                f"jet order mismatch: ({self.order_x},{self.order_y}) vs "
                f"({other.order_x},{other.order_y})"
            )

    def __add__(self, other):
        if isinstance(other, Jet2):
            self._require_same_orders(other)
            return Jet2(self.coeffs + other.coeffs)
        c = self.coeffs.copy()
        c[0, 0] = c[0, 0] + other
        return Jet2(c)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet2) else -np.asarray(other))

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.coeffs * other)
        self._require_same_orders(other)
        a, b = self.coeffs, other.coeffs
        m, n = self.order_x, self.order_y
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
        for i in range(m + 1):
            for j in range(n + 1):
                acc = a[0, 0] * b[i, j]
                for p in range(i + 1):
                    for q in range(j + 1):
                        if p == 0 and q == 0:
                            continue
                        acc = acc + a[p, q] * b[i - p, j - q]
                out[i, j] = acc
        return Jet2(out)

    __rmul__ = __mul__

    def exp(self) -> "Jet2":
        """exp of the jet: e^{a00} times the truncated series in the nilpotent part."""
        a = self.coeffs
        a00 = np.asarray(a[0, 0]).copy()
        if not np.all(np.isfinite(a00)):
            raise ValueError("jet exp requires finite coefficients")
        nil = a.copy()
        nil[0, 0] = 0.0
        npart = Jet2(nil)
        total = Jet2.constant(np.ones(a00.shape), self.order_x, self.order_y)
        term = total
        for k in range(1, self.order_x + self.order_y + 1):
            term = term * npart * (1.0 / k)
            total = total + term
        return Jet2(total.coeffs * np.exp(a00))

    # -- extraction --------------------------------------------------------

    def coefficient(self, i: int, j: int):
        return self.coeffs[i, j]

    def __repr__(self):
        return f"Jet2(orders=({self.order_x},{self.order_y}), batch={self.coeffs.shape[2:]})"


def jet_compose_poly(poly, jet: Jet2) -> Jet2:
    """Evaluate a polynomial on a jet by Horner's scheme in jet arithmetic.

    ``poly`` may be anything with an ascending ``coeffs`` attribute
    (``Polynomial``) or a plain coefficient sequence.
    """
    coeffs = getattr(poly, "coeffs", poly)
    coeffs = np.asarray(coeffs, dtype=float)
    out = Jet2.constant(np.zeros(jet.coeffs.shape[2:]), jet.order_x, jet.order_y)
    for a in coeffs[::-1]:
        out = out * jet + a
    return out


def mixed_derivative_at_origin(jet: Jet2, i: int, j: int):
    """d^{i+j}/dx^i dy^j at the origin, scalar or batched."""
    if not (0 <= i <= jet.order_x and 0 <= j <= jet.order_y):
        raise ValueError(
            f"derivative order ({i},{j}) out of range for jet of orders "
            f"({jet.order_x},{jet.order_y})"
        )
    return math.factorial(i) * math.factorial(j) * jet.coeffs[i, j]
