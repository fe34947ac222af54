"""Derivative-free maximization of the proportion bound.

The search runs over the unconstrained parametrization (free coefficients
of every mollifier piece, odd coefficients of the smoothing polynomial,
and R), so every candidate is admissible by construction.  Nelder-Mead
with a few seeded restarts; each objective evaluation is a full
quadrature of the main-term constants, so the budget is counted in
objective calls and enforced exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .polynomials import MollifierPolynomial, SmoothingPolynomial
from .terms import MollifierSpec, combine, SECTION5

PENALTY = -1e6


@dataclass
class SearchSpace:
    """Degrees of freedom of the optimization.

    ``degrees[i]`` is the top degree of piece i+1; ``q_odd_terms`` the
    number of odd-power coefficients of the smoothing polynomial.
    R moves inside ``r_bounds``; lengths and theta stay frozen.
    """

    degrees: Sequence[int]
    q_odd_terms: int
    nu: Sequence[float]
    theta: float = 0.0
    r_bounds: tuple = (0.1, 10.0)
    convention: str = SECTION5
    strict: bool = True
    optimize_r: bool = True
    freeze_q: bool = False

    def __post_init__(self):
        self.degrees = tuple(int(d) for d in self.degrees)
        self.nu = tuple(float(v) for v in self.nu)
        if len(self.degrees) != len(self.nu):
            raise ValueError("one degree per piece")
        for i, d in enumerate(self.degrees, start=1):
            low = 1 if i == 1 else i * (i - 1) + 1
            if d < low:
                raise ValueError(f"piece {i} needs degree >= {low}")

    def n_free(self, piece: int) -> int:
        if piece == 1:
            return self.degrees[0] - 1
        return self.degrees[piece - 1] - piece * (piece - 1)

    @property
    def dimension(self) -> int:
        n = sum(self.n_free(i) for i in range(1, len(self.degrees) + 1))
        if not self.freeze_q:
            n += self.q_odd_terms
        if self.optimize_r:
            n += 1
        return n

    # -- packing -----------------------------------------------------------

    def pack(self, spec: MollifierSpec) -> np.ndarray:
        parts = []
        for i, piece in enumerate(spec.pieces, start=1):
            free = piece.free_coeffs()
            want = self.n_free(i)
            if free.size < want:
                free = np.concatenate([free, np.zeros(want - free.size)])
            parts.append(free[:want])
        if not self.freeze_q:
            q = np.asarray(spec.smoothing.odd_coeffs, dtype=float)
            if q.size < self.q_odd_terms:
                q = np.concatenate([q, np.zeros(self.q_odd_terms - q.size)])
            parts.append(q[: self.q_odd_terms])
        if self.optimize_r:
            parts.append(np.array([spec.R]))
        return np.concatenate(parts)

    def unpack(self, x: np.ndarray, template: MollifierSpec) -> MollifierSpec:
        x = np.asarray(x, dtype=float)
        pieces = []
        pos = 0
        for i in range(1, len(self.degrees) + 1):
            k = self.n_free(i)
            pieces.append(MollifierPolynomial.from_free_coeffs(x[pos : pos + k], i))
            pos += k
        if self.freeze_q:
            smoothing = template.smoothing
        else:
            smoothing = SmoothingPolynomial(tuple(x[pos : pos + self.q_odd_terms]))
            pos += self.q_odd_terms
        if self.optimize_r:
            r = float(np.clip(x[pos], *self.r_bounds))
        else:
            r = template.R
        return MollifierSpec(
            pieces=pieces,
            smoothing=smoothing,
            R=r,
            nu=self.nu,
            theta=self.theta,
            strict=self.strict,
        )


@dataclass
class OptimizationResult:
    best_spec: MollifierSpec
    best_kappa: float
    evaluations: int
    trace: list = field(default_factory=list)  # (evaluation index, best kappa so far)

    def trace_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("iter,kappa\n")
            for it, kappa in self.trace:
                fh.write(f"{it},{kappa!r}\n")


class _Budget(Exception):
    pass


def optimize_kappa(
    space: SearchSpace,
    start: MollifierSpec,
    budget: int,
    seed: int = 0,
    restarts: int = 3,
    order: int = 12,
) -> OptimizationResult:
    """Maximize kappa from ``start``; never returns less than the start value.

    ``budget`` caps objective evaluations across all restarts.  Failed
    candidate evaluations (constraint violations, quadrature failures)
    score a large penalty and the search continues.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = np.random.default_rng(seed)
    state = {"evals": 0, "best": -math.inf, "best_x": None, "trace": []}

    def objective(x):
        if state["evals"] >= budget:
            raise _Budget()
        state["evals"] += 1
        try:
            spec = space.unpack(x, start)
            kappa = combine(spec, space.convention, order=order).kappa
        except (ValueError, ArithmeticError, FloatingPointError, RuntimeError):
            kappa = PENALTY
        if kappa > state["best"]:
            state["best"] = kappa
            state["best_x"] = np.array(x)
        state["trace"].append((state["evals"], state["best"]))
        return -kappa

    x0 = space.pack(start)
    try:
        objective(x0)
        for attempt in range(restarts):
            if state["evals"] >= budget:
                break
            if attempt == 0:
                guess = state["best_x"]
            else:
                scale = 0.1 * np.maximum(np.abs(state["best_x"]), 0.05)
                guess = state["best_x"] + rng.normal(0.0, 1.0, x0.size) * scale
            minimize(
                objective,
                guess,
                method="Nelder-Mead",
                options={
                    "maxfev": budget - state["evals"],
                    "xatol": 1e-6,
                    "fatol": 1e-9,
                    "adaptive": True,
                },
            )
    except _Budget:
        pass

    best_spec = space.unpack(state["best_x"], start)
    return OptimizationResult(
        best_spec=best_spec,
        best_kappa=state["best"],
        evaluations=state["evals"],
        trace=state["trace"],
    )


def local_sensitivity(
    spec: MollifierSpec,
    space: SearchSpace,
    coordinate: int,
    h: float,
    order: int = 12,
) -> float:
    """Central-difference estimate of d kappa / d coordinate."""
    if h <= 0:
        raise ValueError("step must be positive")
    x = space.pack(spec)
    if not 0 <= coordinate < x.size:
        raise ValueError(f"coordinate {coordinate} out of range (dim {x.size})")
    xp = x.copy()
    xm = x.copy()
    xp[coordinate] += h
    xm[coordinate] -= h
    kp = combine(space.unpack(xp, spec), space.convention, order=order).kappa
    km = combine(space.unpack(xm, spec), space.convention, order=order).kappa
    return (kp - km) / (2.0 * h)
