"""Main-term constants of the mollified second moment and the kappa bound.

``c_ll`` evaluates the diagonal constant for piece ``ell >= 2`` as a
four-dimensional integral whose integrand is expanded as a jet of orders
(ell, ell) in the two formal variables; the mixed derivative at the
origin is then read off the jet.  ``c_11_reduced`` is the closed
two-dimensional reduction valid for the leading piece, where the inner
derivative is first order and computed analytically.  ``c_l_lplus1``
evaluates the adjacent cross constant over simplex x interval.

Two evaluation conventions are exposed (see ``EvalConvention``): the
multi-piece convention substitutes (2R, nu/2) into the constants and
divides the log by 2R; the one-piece convention uses (R, nu) directly
and divides by R.  Every preset pins one of the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Sequence

import numpy as np

from .polynomials import Polynomial, MollifierPolynomial, SmoothingPolynomial
from .jets import Jet2, jet_compose_poly, mixed_derivative_at_origin
from .quadrature import QuadratureRule, integrate_cube, integrate_simplex2

DEFAULT_ORDER = 24

SECTION5 = "section5"
ONE_PIECE = "one-piece"


# ---------------------------------------------------------------------------
# problem instance
# ---------------------------------------------------------------------------

def nu1_limit(theta: float) -> float:
    """Admissible length exponent for the leading piece."""
    return (1.0 - 2.0 * theta) / (4.0 + 2.0 * theta)


def nu_higher_limit(theta: float) -> float:
    """Admissible length exponent for pieces ell >= 2."""
    return (1.0 - 2.0 * theta) / (4.0 + 6.0 * theta)


@dataclass
class MollifierSpec:
    """A full problem instance: pieces, smoothing polynomial, R, lengths."""

    pieces: Sequence[MollifierPolynomial]
    smoothing: SmoothingPolynomial
    R: float
    nu: Sequence[float]
    theta: float = 0.0
    strict: bool = True

    def __post_init__(self):
        self.pieces = tuple(self.pieces)
        self.nu = tuple(float(v) for v in self.nu)
        if len(self.pieces) != len(self.nu):
            raise ValueError("need one length exponent per mollifier piece")
        if not self.pieces:
            raise ValueError("need at least one mollifier piece")
        for i, p in enumerate(self.pieces, start=1):
            if p.piece_index != i:
                raise ValueError(f"piece {i} carries index {p.piece_index}")
        if self.R <= 0:
            raise ValueError("R must be positive")
        if not 0 <= self.theta <= 7.0 / 64.0:
            raise ValueError("theta must lie in [0, 7/64]")
        if self.strict:
            self._check_lengths()

    def _check_lengths(self):
        eps = 1e-12
        lim1 = nu1_limit(self.theta)
        if not 0 < self.nu[0] <= lim1 + eps:
            raise ValueError(
                f"nu_1 = {self.nu[0]} violates nu_1 <= (1-2*theta)/(4+2*theta) = {lim1:.6f}"
            )
        lim = nu_higher_limit(self.theta)
        for i, v in enumerate(self.nu[1:], start=2):
            if not 0 < v <= lim + eps:
                raise ValueError(
                    f"nu_{i} = {v} violates nu_ell <= (1-2*theta)/(4+6*theta) = {lim:.6f}"
                )
            if v > self.nu[0] + eps:
                raise ValueError(f"nu_{i} = {v} exceeds nu_1 = {self.nu[0]}")
        for i in range(len(self.nu) - 1):
            if self.nu[i] + self.nu[i + 1] >= 1.0:
                raise ValueError(
                    f"nu_{i+1} + nu_{i+2} = {self.nu[i] + self.nu[i+1]} must be < 1"
                )

    @property
    def n_pieces(self) -> int:
        return len(self.pieces)


@dataclass
class TermMatrix:
    """Computed main-term constants and the resulting proportion bound."""

    c_diag: list
    c_super: list
    c_total: float
    kappa: float
    convention: str
    error_estimates: dict = field(default_factory=dict)

    def summary(self) -> str:
        lines = [f"convention: {self.convention}"]
        for i, c in enumerate(self.c_diag, start=1):
            lines.append(f"c[{i},{i}]   = {c:+.10f}")
        for i, c in enumerate(self.c_super, start=1):
            lines.append(f"c[{i},{i+1}] = {c:+.10f}")
        lines.append(f"c_total  = {self.c_total:+.10f}")
        lines.append(f"kappa    = {self.kappa:+.8f}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# diagonal constants
# ---------------------------------------------------------------------------

def c_11_reduced(p1, q, R: float, nu: float, order: int = DEFAULT_ORDER) -> float:
    """Leading diagonal constant via the reduced two-dimensional form.

    c = 1 + (1/nu) * int int e^{2Rv} [ d/dx ( e^{R nu x} Q(v + nu x)
        P(x + u) ) |_{x=0} ]^2 du dv,
    with the inner derivative expanded analytically:
        D(u, v) = Q(v) (R nu P(u) + P'(u)) + nu Q'(v) P(u).
    """
    p = p1.base if isinstance(p1, MollifierPolynomial) else p1
    qp = q.to_polynomial() if isinstance(q, SmoothingPolynomial) else q
    pd = p.derivative()
    qd = qp.derivative()

    def integrand(u, v):
        inner = qp(v) * (R * nu * p(u) + pd(u)) + nu * qd(v) * p(u)
        return np.exp(2.0 * R * v) * inner ** 2

    rule = QuadratureRule.gauss_legendre(order)
    return 1.0 + integrate_cube(integrand, 2, rule) / nu


def _diag_prefactor(ell: int) -> float:
    k = ell * ell + (ell - 1) * (ell - 1) - 1
    return 2.0 ** (2 * ell * (ell - 1)) / (
        math.factorial(ell - 2) ** 2 * math.factorial(k)
    )


def _diag_integrand(p_m, qp, R: float, nu: float, ell: int):
    """Jet-valued integrand of the diagonal four-fold integral."""
    k = ell * ell + (ell - 1) * (ell - 1) - 1
    m = ell

    def integrand(t, r, u, v):
        # S = x + y - v(y + r) - u(x + r), affine in (x, y)
        s_jet = Jet2.affine(1.0 - u, 1.0 - v, -r * (u + v), m, m)
        lin = s_jet + (2.0 / nu)
        expo = Jet2(s_jet.coeffs * (nu * R * (t - 0.5))) + (2.0 * R * t)
        q_shared = Jet2(s_jet.coeffs * (t * nu / 2.0)) + t
        qa1 = q_shared + Jet2.affine(-nu / 2.0, nu * v / 2.0, nu * v * r / 2.0, m, m)
        qa2 = q_shared + Jet2.affine(nu * u / 2.0, -nu / 2.0, nu * u * r / 2.0, m, m)
        f = lin * expo.exp() * jet_compose_poly(qp, qa1) * jet_compose_poly(qp, qa2)
        xr = Jet2.affine(1.0, 0.0, r, m, m)
        yr = Jet2.affine(0.0, 1.0, r, m, m)
        for _ in range(ell - 1):
            f = f * xr * yr
        f = f * jet_compose_poly(p_m, Jet2.affine(1.0 - u, 0.0, (1.0 - u) * r, m, m))
        f = f * jet_compose_poly(p_m, Jet2.affine(0.0, 1.0 - v, (1.0 - v) * r, m, m))
        scale = (1.0 - r) ** k
        if ell >= 3:
            scale = scale * u ** (ell - 2) * v ** (ell - 2)
        return Jet2(f.coeffs * scale)

    return integrand


def c_ll(p_ell, q, R: float, nu: float, ell: int, order: int = DEFAULT_ORDER) -> float:
    """Diagonal constant for piece ell >= 2 (ell = 1 uses the reduced form).

    Four-fold integral over (t, r, u, v) of the jet-valued integrand; the
    coefficient of x^ell y^ell, scaled by (ell!)^2, is the mixed derivative
    the formula extracts.
    """
    if ell < 2:
        raise ValueError("use c_11_reduced for the leading piece")
    p = p_ell.base if isinstance(p_ell, MollifierPolynomial) else p_ell
    qp = q.to_polynomial() if isinstance(q, SmoothingPolynomial) else q
    p_m = p.derivative(ell * (ell - 1))
    rule = QuadratureRule.gauss_legendre(order)
    jet = integrate_cube(_diag_integrand(p_m, qp, R, nu, ell), 4, rule)
    return _diag_prefactor(ell) * float(mixed_derivative_at_origin(jet, ell, ell))


# ---------------------------------------------------------------------------
# adjacent cross constants
# ---------------------------------------------------------------------------

def c_l_lplus1(
    p_ell,
    p_next,
    q,
    R: float,
    nu_ell: float,
    nu_next: float,
    ell: int,
    order: int = DEFAULT_ORDER,
) -> float:
    """Adjacent cross constant c_{ell, ell+1} over simplex x interval."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    pa = p_ell.base if isinstance(p_ell, MollifierPolynomial) else p_ell
    pb = p_next.base if isinstance(p_next, MollifierPolynomial) else p_next
    qp = q.to_polynomial() if isinstance(q, SmoothingPolynomial) else q
    pa_m = pa.derivative(ell * (ell - 1))
    pb_m = pb.derivative(ell * (ell + 1))
    ratio = nu_next / nu_ell
    m = ell

    def integrand(a, b, u):
        expo = Jet2.affine(
            -R * nu_ell / 2.0, R * nu_ell / 2.0, R * u * nu_next * (a - b) / 2.0, m, m
        )
        qa1 = Jet2.affine(-nu_ell / 2.0, 0.0, a * u * nu_next / 2.0, m, m)
        qa2 = Jet2.affine(0.0, nu_ell / 2.0, 1.0 - b * u * nu_next / 2.0, m, m)
        parg = Jet2.affine(1.0, 1.0, 1.0 - (1.0 - u) * ratio, m, m)
        f = (
            expo.exp()
            * jet_compose_poly(qp, qa1)
            * jet_compose_poly(qp, qa2)
            * jet_compose_poly(pa_m, parg)
        )
        scale = (
            u ** (2 * ell)
            * (1.0 - u) ** (2 * ell * ell - 1)
            * (a * b) ** (ell - 1)
            * pb_m((1.0 - a - b) * u)
        )
        return Jet2(f.coeffs * scale)

    rule = QuadratureRule.gauss_legendre(order)
    jet = integrate_simplex2(integrand, rule, extra_dims=1)
    pref = (
        2.0 ** (2 * ell * ell)
        / math.factorial(2 * ell * ell - 1)
        * ratio ** (ell * (ell + 1))
        * math.exp(R)
    )
    return pref * float(mixed_derivative_at_origin(jet, ell, ell))


# ---------------------------------------------------------------------------
# combination and the proportion bound
# ---------------------------------------------------------------------------

def _effective(spec: MollifierSpec, convention: str):
    """(R_eff, nu_eff list, log divisor) under the chosen convention."""
    if convention == SECTION5:
        return 2.0 * spec.R, [v / 2.0 for v in spec.nu], 2.0 * spec.R
    if convention == ONE_PIECE:
        return spec.R, list(spec.nu), spec.R
    raise ValueError(f"unknown convention {convention!r}")


def combine(
    spec: MollifierSpec, convention: str = SECTION5, order: int = DEFAULT_ORDER
) -> TermMatrix:
    """All diagonal and adjacent constants; gap >= 2 cross terms are zero.

    c_total = sum_ell c_{ell,ell} + 2 sum_ell c_{ell,ell+1}; the factor 2
    accounts for the conjugate pair of each adjacent cross term.
    """
    r_eff, nu_eff, divisor = _effective(spec, convention)
    q = spec.smoothing
    diag = []
    for i, piece in enumerate(spec.pieces, start=1):
        if i == 1:
            diag.append(c_11_reduced(piece, q, r_eff, nu_eff[0], order=order))
        else:
            diag.append(c_ll(piece, q, r_eff, nu_eff[i - 1], i, order=order))
    super_ = []
    for i in range(1, spec.n_pieces):
        super_.append(
            c_l_lplus1(
                spec.pieces[i - 1],
                spec.pieces[i],
                q,
                r_eff,
                nu_eff[i - 1],
                nu_eff[i],
                i,
                order=order,
            )
        )
    c_total = sum(diag) + 2.0 * sum(super_)
    if c_total <= 0:
        raise ArithmeticError(f"main-term constant must be positive, got {c_total}")
    kappa = 1.0 - math.log(c_total) / divisor
    return TermMatrix(diag, super_, c_total, kappa, convention)


def kappa_bound(c_total: float, R: float) -> float:
    """Multi-piece bound: 1 - log(c)/(2R), c evaluated at (2R, nu/2)."""
    if c_total <= 0:
        raise ValueError("main-term constant must be positive")
    if R <= 0:
        raise ValueError("R must be positive")
    return 1.0 - math.log(c_total) / (2.0 * R)


def kappa_one_piece(c11: float, R: float) -> float:
    """Single-piece bound: 1 - log(c11)/R, c11 evaluated at (R, nu)."""
    if c11 <= 0:
        raise ValueError("main-term constant must be positive")
    if R <= 0:
        raise ValueError("R must be positive")
    return 1.0 - math.log(c11) / R


def c_11_closed_form(R: float, nu: float) -> float:
    """Closed form of the reduced constant for P(x) = x, Q(x) = 1 - x."""
    e = math.exp(2.0 * R)
    num = (
        3.0
        + 6.0 * R
        - 2.0 * R ** 3 * (nu - 3.0) * nu
        + 2.0 * R ** 4 * nu ** 2
        + R ** 2 * (6.0 + nu ** 2)
        - e * (3.0 + R ** 2 * nu ** 2)
    )
    return 1.0 - num / (12.0 * R ** 3 * nu)


def kappa_surface(p1, q, r_grid, nu_grid, order: int = DEFAULT_ORDER):
    """Single-piece kappa over an (R, nu) grid.

    Uses the closed form whenever (P, Q) is exactly (x, 1-x), otherwise
    the reduced quadrature.  Returns a list of (R, nu, kappa) rows.
    """
    r_grid = list(r_grid)
    nu_grid = list(nu_grid)
    if not r_grid or not nu_grid:
        raise ValueError("grids must be nonempty")
    p = p1.base if isinstance(p1, MollifierPolynomial) else p1
    qp = q.to_polynomial() if isinstance(q, SmoothingPolynomial) else q
    closed = p == Polynomial([0.0, 1.0]) and qp == Polynomial([1.0, -1.0])
    rows = []
    for nu in nu_grid:
        for r in r_grid:
            if closed:
                c11 = c_11_closed_form(r, nu)
            else:
                c11 = c_11_reduced(p, qp, r, nu, order=order)
            rows.append((r, nu, kappa_one_piece(c11, r)))
    return rows
