"""Published parameter sets and their target bounds.

Each preset carries the polynomials exactly as printed (six significant
digits), the length exponents and R, the evaluation convention it is
pinned to, and the target value of the proportion bound with the
tolerance used by the reproduction gate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .polynomials import Polynomial, MollifierPolynomial, SmoothingPolynomial
from .terms import MollifierSpec, SECTION5


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    spec: MollifierSpec
    convention: str
    target_kappa: float
    tolerance: float


def _mollifier(coeffs, ell):
    return MollifierPolynomial(Polynomial(coeffs), ell)


def _ramanujan() -> Preset:
    spec = MollifierSpec(
        pieces=(
            _mollifier([0, 0.921756, 0.150879, -0.371912, 0.488862, -0.189585], 1),
            _mollifier([0, 0, 0, -0.0000537029, 0.0000752763, -0.000142568], 2),
        ),
        smoothing=SmoothingPolynomial((1.53685, -2.7925, 2.77524, -1.01853)),
        R=2.82505,
        nu=(0.25, 0.25),
        theta=0.0,
    )
    return Preset(
        "ramanujan",
        "two pieces, eigenvalue bound with theta = 0, nu = 1/4",
        spec,
        SECTION5,
        0.0693872,
        1e-3,
    )


def _kim_sarnak() -> Preset:
    spec = MollifierSpec(
        pieces=(
            _mollifier([0, 0.93271, 0.147723, -0.35572, 0.444208, -0.168921], 1),
            _mollifier([0, 0, 0, -0.0000665503, -0.00016405, 0.0000736009], 2),
        ),
        smoothing=SmoothingPolynomial((1.58992, -2.99061, 3.01825, -1.11694)),
        R=3.21,
        nu=(5.0 / 27.0, 25.0 / 149.0),
        theta=7.0 / 64.0,
    )
    return Preset(
        "kim-sarnak",
        "two pieces, unconditional eigenvalue bound with theta = 7/64",
        spec,
        SECTION5,
        0.0297607,
        1e-3,
    )


def _zeta_farmer() -> Preset:
    spec = MollifierSpec(
        pieces=(
            _mollifier([0, 0.702374, 0.00612233, 0.281569, 0.296314, -0.286379], 1),
            _mollifier([0, 0, 0, 0.0690439, -0.0187972, 0.0319485], 2),
        ),
        smoothing=SmoothingPolynomial((0.488276, -0.0155446, 0.00683032, -0.0320679)),
        R=0.75,
        nu=(1.0, 1.0),
        theta=0.0,
        strict=False,  # conjectural lengths nu -> 1 exceed the proven range
    )
    return Preset(
        "zeta-farmer",
        "conjectural nu -> 1 scenario with two pieces",
        spec,
        SECTION5,
        0.60563,
        2e-3,
    )


def _conrey_one_piece() -> Preset:
    spec = MollifierSpec(
        pieces=(_mollifier([0.0, 1.0], 1),),
        # Q(x) = 1 - x = 1/2 + (1/2)(1-2x)
        smoothing=SmoothingPolynomial((0.5,)),
        R=1.3,
        nu=(0.5,),
        theta=0.0,
        strict=False,  # nu = 1/2 is the classical zeta-function length
    )
    return Preset(
        "conrey-one-piece",
        "single piece, P(x) = x, Q(x) = 1 - x at nu = 1/2",
        spec,
        "one-piece",
        0.34276,
        5e-4,
    )


PRESETS = {
    p.name: p
    for p in (_ramanujan(), _kim_sarnak(), _zeta_farmer(), _conrey_one_piece())
}
