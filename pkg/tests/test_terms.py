import math

import numpy as np
import pytest

from cuspmoll.polynomials import Polynomial, MollifierPolynomial, SmoothingPolynomial
from cuspmoll.presets import PRESETS
from cuspmoll.quadrature import QuadratureRule
from cuspmoll.terms import (
    MollifierSpec,
    ONE_PIECE,
    SECTION5,
    c_11_closed_form,
    c_11_reduced,
    c_l_lplus1,
    c_ll,
    combine,
    kappa_bound,
    kappa_one_piece,
    kappa_surface,
    nu1_limit,
    nu_higher_limit,
)

X = Polynomial([0.0, 1.0])
ONE_MINUS_X = Polynomial([1.0, -1.0])


# -- the primary oracle: closed form vs quadrature ---------------------------

@pytest.mark.parametrize("R", [0.5, 1.0, 2.0, 3.0])
@pytest.mark.parametrize("nu", [0.1, 0.25, 0.5])
def test_reduced_matches_closed_form(R, nu):
    got = c_11_reduced(X, ONE_MINUS_X, R, nu)
    assert got == pytest.approx(c_11_closed_form(R, nu), abs=1e-8)


def test_closed_form_value_at_figure_point():
    # independently re-derived closed form for P(x)=x, Q(x)=1-x:
    # the inner derivative is (1-v)(1 + R nu u) - nu u, so
    # c = 1 + (1/nu) II e^{2Rv} [(1-v)(1+R nu u) - nu u]^2 du dv,
    # integrated by direct scalar double quadrature below.
    R, nu = 1.3, 0.5

    def inner(u, v):
        return (1 - v) * (1 + R * nu * u) - nu * u

    rule = QuadratureRule.gauss_legendre(40)
    un, uw = rule.nodes, rule.weights
    total = 0.0
    for ui, wi in zip(un, uw):
        for vi, wj in zip(un, uw):
            total += wi * wj * math.exp(2 * R * vi) * inner(ui, vi) ** 2
    expect = 1 + total / nu
    assert c_11_closed_form(R, nu) == pytest.approx(expect, rel=1e-10)


def test_reduced_with_zero_polynomial():
    zero = Polynomial([0.0])
    assert c_11_reduced(zero, ONE_MINUS_X, 1.5, 0.3) == pytest.approx(1.0, abs=1e-14)


# -- diagonal ell >= 2 --------------------------------------------------------

def test_c22_vanishing_piece():
    p2 = MollifierPolynomial(Polynomial([0.0]), 2)
    q = PRESETS["ramanujan"].spec.smoothing
    assert c_ll(p2, q, 2.0, 0.125, 2) == 0.0


def test_c22_rejects_ell_one():
    with pytest.raises(ValueError, match="reduced"):
        c_ll(X, ONE_MINUS_X, 1.0, 0.25, 1)


def test_c22_quadratic_scaling():
    """c_{2,2}(s P) = s^2 c_{2,2}(P): the form is quadratic with zero offset."""
    q = PRESETS["ramanujan"].spec.smoothing
    p2 = Polynomial([0, 0, 0, 0.3, -0.1, 0.2])
    base = c_ll(p2, q, 1.7, 0.125, 2, order=12)
    for s in (2.0, -0.5):
        scaled = c_ll(s * p2, q, 1.7, 0.125, 2, order=12)
        assert scaled == pytest.approx(s * s * base, rel=1e-11)


def test_c11_quadratic_scaling_offset_one():
    """c_{1,1}(s P) - 1 = s^2 (c_{1,1}(P) - 1)."""
    q = PRESETS["ramanujan"].spec.smoothing
    p = Polynomial([0, 0.4, 0.6])
    base = c_11_reduced(p, q, 1.7, 0.25)
    for s in (3.0, -1.0):
        scaled = c_11_reduced(s * p, q, 1.7, 0.25)
        assert scaled - 1.0 == pytest.approx(s * s * (base - 1.0), rel=1e-11)


def test_c22_zero_shift_cross_check():
    """R -> 0 with Q == 1 against an independently coded direct integrand.

    At R = 0 and constant smoothing the integrand loses its exponential
    and Q factors; what remains is a polynomial, integrated here by a
    separately written mixed finite-difference + nested-loop quadrature.
    """
    p2 = Polynomial([0, 0, 0, 1.0, -0.5])
    p2_dd = p2.derivative(2)
    nu = 0.3
    ell = 2
    k = ell * ell + (ell - 1) ** 2 - 1

    def plain(x, y):
        # scalar integrand at (x, y), quadrature over (r, u, v); t integrates to 1
        rule = QuadratureRule.gauss_legendre(16)
        nodes, weights = rule.nodes, rule.weights
        total = 0.0
        for r, wr in zip(nodes, weights):
            for u, wu in zip(nodes, weights):
                for v, wv in zip(nodes, weights):
                    s = x + y - v * (y + r) - u * (x + r)
                    val = (
                        (2.0 / nu + s)
                        * (1 - r) ** k
                        * (x + r)
                        * (y + r)
                        * p2_dd((1 - u) * (x + r))
                        * p2_dd((1 - v) * (y + r))
                    )
                    total += wr * wu * wv * val
        return total

    h = 1e-3
    stencil_x = {-1: -0.5 / h, 0: 0.0, 1: 0.5 / h}
    d2 = {-1: 1.0 / h ** 2, 0: -2.0 / h ** 2, 1: 1.0 / h ** 2}
    mixed = 0.0
    for i, ci in d2.items():
        for j, cj in d2.items():
            mixed += ci * cj * plain(i * h, j * h)
    pref = 2.0 ** (2 * ell * (ell - 1)) / math.factorial(k)
    expect = pref * mixed
    got = c_ll(p2, SmoothingPolynomial.one(), 0.0 + 1e-300, nu, 2, order=16)
    assert got == pytest.approx(expect, rel=1e-5)


def test_c22_xy_uv_swap_symmetry():
    """The integrated diagonal jet is symmetric under (x,u) <-> (y,v).

    Pointwise the jet is not symmetric; integrating over (u, v) restores
    the transpose symmetry, so coeffs[i, j] == coeffs[j, i].
    """
    from cuspmoll.quadrature import integrate_cube
    from cuspmoll.terms import _diag_integrand

    pre = PRESETS["ramanujan"].spec
    p_m = pre.pieces[1].base.derivative(2)
    qp = pre.smoothing.to_polynomial()
    integrand = _diag_integrand(p_m, qp, 2 * pre.R, pre.nu[1] / 2, 2)
    jet = integrate_cube(integrand, 4, QuadratureRule.gauss_legendre(16))
    assert np.max(np.abs(jet.coeffs - jet.coeffs.T)) < 1e-10 * max(
        1.0, np.max(np.abs(jet.coeffs))
    )


# -- adjacent cross term -------------------------------------------------------

def test_c12_vanishing_second_piece():
    q = PRESETS["ramanujan"].spec.smoothing
    p1 = PRESETS["ramanujan"].spec.pieces[0]
    zero2 = MollifierPolynomial(Polynomial([0.0]), 2)
    assert c_l_lplus1(p1, zero2, q, 1.0, 0.25, 0.25, 1) == 0.0


def test_c12_linear_in_second_piece():
    q = PRESETS["ramanujan"].spec.smoothing
    p1 = PRESETS["ramanujan"].spec.pieces[0]
    p2 = Polynomial([0, 0, 0, 0.2, -0.05, 0.1])
    base = c_l_lplus1(p1, p2, q, 1.3, 0.25, 0.25, 1, order=16)
    for s in (2.0, -3.0, 0.25):
        scaled = c_l_lplus1(p1, s * p2, q, 1.3, 0.25, 0.25, 1, order=16)
        assert scaled == pytest.approx(s * base, rel=1e-12)


def test_c12_linear_in_first_piece():
    """Together with linearity in the second piece: the cross form is bilinear."""
    q = PRESETS["ramanujan"].spec.smoothing
    p2 = Polynomial([0, 0, 0, 0.2, -0.05, 0.1])
    pa = Polynomial([0, 0.7, 0.3])
    pb = Polynomial([0, 0.2, 0.1, 0.4])
    va = c_l_lplus1(pa, p2, q, 1.3, 0.25, 0.25, 1, order=12)
    vb = c_l_lplus1(pb, p2, q, 1.3, 0.25, 0.25, 1, order=12)
    combo = Polynomial(
        2.0 * np.pad(pa.coeffs, (0, 1)) - 0.5 * pb.coeffs
    )
    vc = c_l_lplus1(combo, p2, q, 1.3, 0.25, 0.25, 1, order=12)
    assert vc == pytest.approx(2.0 * va - 0.5 * vb, rel=1e-11)


def test_c12_jet_vs_finite_difference(rng):
    """Acceptance-style: jet mixed derivative vs central differences, 5 instances."""
    rule = QuadratureRule.gauss_legendre(10)
    for _ in range(5):
        p1c = rng.normal(size=5)
        p2c = np.concatenate([[0, 0, 0], rng.normal(size=2)])
        qc = rng.normal(size=3)
        R = float(rng.uniform(0.3, 2.0))
        nu1 = float(rng.uniform(0.2, 0.5))
        nu2 = nu1 * float(rng.uniform(0.6, 1.0))
        p1 = Polynomial(p1c)
        p2dd = Polynomial(p2c).derivative(2)
        q = Polynomial(qc)

        def scalar_version(x, y):
            total = 0.0
            for a, wa in zip(rule.nodes, rule.weights):
                for t, wt in zip(rule.nodes, rule.weights):
                    b = (1 - a) * t
                    jac = 1 - a
                    for u, wu in zip(rule.nodes, rule.weights):
                        val = (
                            u ** 2
                            * (1 - u)
                            * math.exp(R * (nu1 * (y - x) / 2 + u * nu2 * (a - b) / 2))
                            * q((-x * nu1 + a * u * nu2) / 2)
                            * q(1 + (y * nu1 - b * u * nu2) / 2)
                            * p1(x + y + 1 - (1 - u) * nu2 / nu1)
                            * p2dd((1 - a - b) * u)
                        )
                        total += wa * wt * wu * val * jac
            return total

        h = 1e-4
        fd = (
            scalar_version(h, h)
            - scalar_version(h, -h)
            - scalar_version(-h, h)
            + scalar_version(-h, -h)
        ) / (4 * h * h)
        jet_val = c_l_lplus1(p1, Polynomial(p2c), q, R, nu1, nu2, 1, order=10)
        pref = 4.0 * (nu2 / nu1) ** 2 * math.exp(R)
        assert fd * pref == pytest.approx(jet_val, rel=1e-6)


# -- spec admissibility --------------------------------------------------------

def _one_piece_spec(**kw):
    args = dict(
        pieces=(MollifierPolynomial(X, 1),),
        smoothing=SmoothingPolynomial((0.5,)),
        R=1.3,
        nu=(0.5,),
        theta=0.0,
        strict=False,
    )
    args.update(kw)
    return MollifierSpec(**args)


def test_nu_bounds_enforced():
    with pytest.raises(ValueError, match="nu_1"):
        _one_piece_spec(nu=(0.5,), strict=True)
    # at theta = 0 the bound is 1/4; exactly at it passes (limit case)
    _one_piece_spec(nu=(0.25,), strict=True)
    assert nu1_limit(0.0) == pytest.approx(0.25)
    assert nu1_limit(7 / 64) == pytest.approx(5 / 27)
    assert nu_higher_limit(7 / 64) == pytest.approx(25 / 149)


def test_nu_ordering_enforced():
    p1 = MollifierPolynomial(X, 1)
    p2 = MollifierPolynomial.from_free_coeffs([0.1], 2)
    with pytest.raises(ValueError, match="exceeds nu_1"):
        MollifierSpec(
            pieces=(p1, p2),
            smoothing=SmoothingPolynomial((0.5,)),
            R=1.0,
            nu=(0.2, 0.24),
            theta=0.0,
        )


def test_theta_range():
    with pytest.raises(ValueError, match="theta"):
        _one_piece_spec(theta=0.2)


# -- combination and kappa -----------------------------------------------------

def test_combine_single_piece():
    spec = _one_piece_spec()
    tm = combine(spec, ONE_PIECE)
    assert tm.c_total == pytest.approx(c_11_closed_form(1.3, 0.5), abs=1e-8)
    assert tm.c_super == []


def test_combine_vanishing_second_piece():
    base = PRESETS["ramanujan"].spec
    zeroed = MollifierSpec(
        pieces=(base.pieces[0], MollifierPolynomial(Polynomial([0.0]), 2)),
        smoothing=base.smoothing,
        R=base.R,
        nu=base.nu,
        theta=base.theta,
    )
    two = combine(zeroed, SECTION5)
    one = combine(
        MollifierSpec(
            pieces=(base.pieces[0],),
            smoothing=base.smoothing,
            R=base.R,
            nu=base.nu[:1],
            theta=base.theta,
        ),
        SECTION5,
    )
    assert two.c_diag[1] == 0.0
    assert two.c_super[0] == 0.0
    assert two.c_total == one.c_total
    assert abs(two.kappa - one.kappa) < 1e-12


def test_kappa_bound_trivial():
    assert kappa_bound(1.0, 2.0) == 1.0
    assert kappa_one_piece(1.0, 0.7) == 1.0
    with pytest.raises(ValueError):
        kappa_bound(-1.0, 1.0)
    with pytest.raises(ValueError):
        kappa_bound(1.0, 0.0)


def test_one_piece_optimal_r_near_1_3():
    rs = np.linspace(0.5, 3.0, 126)
    kappas = [kappa_one_piece(c_11_closed_form(r, 0.5), r) for r in rs]
    best = rs[int(np.argmax(kappas))]
    assert 1.2 <= best <= 1.4


def test_kappa_decreases_for_large_r():
    k10 = kappa_one_piece(c_11_closed_form(10.0, 0.5), 10.0)
    k20 = kappa_one_piece(c_11_closed_form(20.0, 0.5), 20.0)
    assert k20 < k10 < kappa_one_piece(c_11_closed_form(1.3, 0.5), 1.3)


def test_surface_single_point():
    rows = kappa_surface(X, ONE_MINUS_X, [1.3], [0.5])
    assert len(rows) == 1
    r, nu, kappa = rows[0]
    assert kappa == pytest.approx(kappa_one_piece(c_11_closed_form(1.3, 0.5), 1.3), abs=1e-12)


def test_surface_unimodal_in_r():
    rows = kappa_surface(X, ONE_MINUS_X, np.linspace(0.2, 8.0, 80), [0.5, 0.25])
    for nu in (0.5, 0.25):
        ks = [k for r, n, k in rows if n == nu]
        peak = int(np.argmax(ks))
        assert all(ks[i] <= ks[i + 1] + 1e-12 for i in range(peak))
        assert all(ks[i] >= ks[i + 1] - 1e-12 for i in range(peak, len(ks) - 1))


def test_surface_closed_form_dispatch():
    rows_closed = kappa_surface(X, ONE_MINUS_X, [0.9, 1.7], [0.3])
    rows_quad = kappa_surface(
        Polynomial([0.0, 1.0 + 1e-16]), ONE_MINUS_X, [0.9, 1.7], [0.3]
    )
    for (r1, n1, k1), (r2, n2, k2) in zip(rows_closed, rows_quad):
        assert k1 == pytest.approx(k2, abs=1e-9)


def test_monotone_quadrature_convergence():
    """Error estimates shrink at least 10x per order doubling on a preset."""
    pre = PRESETS["ramanujan"].spec
    vals = {}
    for order in (6, 12, 24):
        vals[order] = c_ll(pre.pieces[1], pre.smoothing, 2 * pre.R, pre.nu[1] / 2, 2, order=order)
    err1 = abs(vals[12] - vals[6])
    err2 = abs(vals[24] - vals[12])
    assert err2 < err1 / 10.0


# -- presets -------------------------------------------------------------------

@pytest.mark.parametrize("name,target", [("ramanujan", 0.0693872), ("kim-sarnak", 0.0297607)])
def test_preset_reproduction(name, target):
    pre = PRESETS[name]
    tm = combine(pre.spec, pre.convention)
    assert tm.kappa == pytest.approx(target, abs=1e-3)
    # the match is in fact much tighter than the acceptance tolerance
    assert tm.kappa == pytest.approx(target, abs=2e-6)
