"""Real polynomials with the constraint parametrizations used by the mollifier.

Three flavours:

* ``Polynomial``          -- plain dense coefficient vector, exact algebra.
* ``MollifierPolynomial`` -- piece ``ell`` of the mollifier; ``ell = 1``
  requires P(0) = 0 and P(1) = 1, pieces ``ell > 1`` must vanish to order
  ell*(ell-1) at zero.  Both constraints are realized by construction from
  an unconstrained free-coefficient vector, so optimizers can search
  without feasibility checks.
* ``SmoothingPolynomial`` -- the smoothing polynomial Q, stored in the
  (1-2x)-odd-power basis with the constant term pinned by Q(0) = 1, which
  makes Q(x) + Q(1-x) constant identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

NEG_INF_DEGREE = float("-inf")


class Polynomial:
    """Dense univariate polynomial over the reals; index = power of x."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float)).copy()
        if c.ndim != 1:
            raise ValueError("coefficient array must be one-dimensional")
        if c.size == 0:
            c = np.zeros(1)
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self):
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else NEG_INF_DEGREE

    def __call__(self, x):
        """Evaluate by Horner's scheme; accepts scalars or arrays."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a in self.coeffs[::-1]:
            out = out * x + a
        return out if out.ndim else float(out)

    def derivative(self, m: int = 1) -> "Polynomial":
        """m-th formal derivative; drops to the zero polynomial when m > degree."""
        if m < 0:
            raise ValueError("derivative order must be nonnegative")
        c = self.coeffs
        for _ in range(m):
            if c.size <= 1:
                return Polynomial([0.0])
            c = c[1:] * np.arange(1, c.size)
        return Polynomial(c)

    def __mul__(self, s: float) -> "Polynomial":
        return Polynomial(self.coeffs * s)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n)
        b = np.zeros(n)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return bool(np.array_equal(a, b))

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()})"


class MollifierPolynomial:
    """Mollifier piece P_ell with its vanishing/normalization constraints.

    ``ell == 1``: P(0) = 0 and P(1) = 1.
    ``ell >= 2``: coefficients of x^0 .. x^{ell(ell-1)} all vanish.
    """

    __slots__ = ("base", "piece_index")

    def __init__(self, base: Polynomial, piece_index: int, tol: float = 1e-4):
        if piece_index < 1:
            raise ValueError("piece index must be >= 1")
        self.base = base
        self.piece_index = int(piece_index)
        self._check(tol)

    def _check(self, tol: float) -> None:
        c = self.base.coeffs
        if self.piece_index == 1:
            if abs(c[0]) > tol:
                raise ValueError(f"piece 1 requires P(0) = 0, got {c[0]!r}")
            if abs(self.base(1.0) - 1.0) > tol:
                raise ValueError(f"piece 1 requires P(1) = 1, got {self.base(1.0)!r}")
        else:
            vanish = self.piece_index * (self.piece_index - 1)
            low = c[: vanish + 1]
            if np.any(np.abs(low) > tol):
                raise ValueError(
                    f"piece {self.piece_index} requires zero coefficients "
                    f"through x^{vanish}, got {low.tolist()}"
                )

    @classmethod
    def from_free_coeffs(cls, free, piece_index: int) -> "MollifierPolynomial":
        """Build from an unconstrained vector.

        Piece 1: ``free`` holds the coefficients of x^2 .. x^d and the x^1
        coefficient is set to 1 - sum(free) so that P(1) = 1.
        Piece ell > 1: ``free`` holds the coefficients of
        x^{ell(ell-1)+1} .. x^d; everything below is zero.
        """
        free = np.atleast_1d(np.asarray(free, dtype=float))
        if piece_index == 1:
            coeffs = np.concatenate(([0.0, 1.0 - free.sum()], free))
        else:
            vanish = piece_index * (piece_index - 1)
            coeffs = np.concatenate((np.zeros(vanish + 1), free))
        return cls(Polynomial(coeffs), piece_index)

    def free_coeffs(self) -> np.ndarray:
        """Inverse of :meth:`from_free_coeffs` (up to trailing zeros)."""
        c = self.base.coeffs
        if self.piece_index == 1:
            return c[2:].copy()
        return c[self.piece_index * (self.piece_index - 1) + 1 :].copy()

    def __call__(self, x):
        return self.base(x)

    def derivative(self, m: int = 1) -> Polynomial:
        return self.base.derivative(m)

    def __repr__(self):
        return f"MollifierPolynomial(ell={self.piece_index}, {self.base!r})"


@dataclass(frozen=True)
class SmoothingPolynomial:
    """Q in the (1-2x) odd-power basis: Q(x) = a0 + sum_i c_i (1-2x)^{2i+1}.

    The constant term is implied by Q(0) = 1, i.e. a0 = 1 - sum(c_i), and
    Q(x) + Q(1-x) = 2*a0 holds identically because odd powers of (1-2x)
    flip sign under x -> 1-x.
    """

    odd_coeffs: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "odd_coeffs", tuple(float(c) for c in self.odd_coeffs))

    @property
    def constant_term(self) -> float:
        return 1.0 - sum(self.odd_coeffs)

    def to_polynomial(self) -> Polynomial:
        """Expand into the monomial basis."""
        deg = 2 * len(self.odd_coeffs) - 1 if self.odd_coeffs else 0
        out = np.zeros(deg + 1)
        out[0] = self.constant_term
        base = np.array([1.0, -2.0])  # 1 - 2x
        power = np.array([1.0])
        k = 0
        for i, ci in enumerate(self.odd_coeffs):
            while k < 2 * i + 1:
                power = np.convolve(power, base)
                k += 1
            out[: power.size] += ci * power
        return Polynomial(out)

    def __call__(self, x):
        # native-basis evaluation: odd powers of w = 1-2x flip sign exactly
        # under x -> 1-x, so Q(x) + Q(1-x) - 2*a0 cancels to zero in floats
        x = np.asarray(x, dtype=float)
        w = 1.0 - 2.0 * x
        w2 = w * w
        acc = np.zeros_like(w)
        for c in reversed(self.odd_coeffs):
            acc = acc * w2 + c
        out = self.constant_term + acc * w
        return out if out.ndim else float(out)

    @classmethod
    def one(cls) -> "SmoothingPolynomial":
        """Q identically 1 (no odd terms)."""
        return cls(())
