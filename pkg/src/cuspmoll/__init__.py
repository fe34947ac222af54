"""Mollified second-moment main terms and critical-zero proportion bounds.

The package evaluates the main-term constants of the mollified second
moment of a cusp-form L-function (diagonal pieces, adjacent cross pieces),
combines them into the constant that controls the lower bound on the
proportion of critical-line zeros, and optimizes the free polynomial
coefficients.  A companion arithmetic module provides the Hecke-eigenvalue
series of the discriminant form and the Dirichlet-convolution identities
that underpin the main-term formulas.
"""

from .polynomials import Polynomial, MollifierPolynomial, SmoothingPolynomial
from .jets import Jet2, mixed_derivative_at_origin
from .quadrature import QuadratureRule, integrate_cube, integrate_simplex2, converge
from .terms import (
    MollifierSpec,
    TermMatrix,
    c_ll,
    c_11_reduced,
    c_l_lplus1,
    c_11_closed_form,
    combine,
    kappa_bound,
    kappa_one_piece,
    kappa_surface,
)
from .presets import PRESETS

__version__ = "0.1.0"

__all__ = [
    "Polynomial",
    "MollifierPolynomial",
    "SmoothingPolynomial",
    "Jet2",
    "mixed_derivative_at_origin",
    "QuadratureRule",
    "integrate_cube",
    "integrate_simplex2",
    "converge",
    "MollifierSpec",
    "TermMatrix",
    "c_ll",
    "c_11_reduced",
    "c_l_lplus1",
    "combine",
    "kappa_bound",
    "kappa_one_piece",
    "PRESETS",
]
