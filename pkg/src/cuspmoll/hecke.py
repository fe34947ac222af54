"""Hecke-eigenvalue series of the discriminant form and Dirichlet algebra.

The concrete cusp form is the weight-12, level-1 discriminant form, whose
coefficients tau(n) come from the q-expansion of q * prod(1 - q^n)^24.
The expansion is computed exactly: the eta product is expanded by Euler's
pentagonal-number identity and raised to the 24th power by a squaring
ladder of truncated polynomial multiplications, each performed by packing
coefficients into fixed-width fields of one large integer (gmpy2), so
overflow is impossible by construction and every tau(n) is an exact
integer.

Normalized eigenvalues lambda(n) = tau(n) / n^{11/2} satisfy lambda(1)=1,
the Hecke relations, and the divisor-count bound |lambda(n)| <= d(n).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import gmpy2
import numpy as np

from ._kernels import dirichlet_convolve_f64, dirichlet_inverse_f64, weighted_partial_sums

# field width (bits) for packed-coefficient multiplication; |coeff| of every
# intermediate is far below 2^(PACK_BITS-1) for any practical cutoff:
# |tau(n)| <= d(n) n^{11/2} < 2^152 up to n = 10^8
PACK_BITS = 160
_PACK_BYTES = PACK_BITS // 8
_HALF = 1 << (PACK_BITS - 1)


@dataclass(frozen=True)
class FormSpec:
    """Primitive-form parameters; the shipped instance is the discriminant form."""

    weight: int = 12
    level: int = 1

    def __post_init__(self):
        if (self.weight, self.level) != (12, 1):
            raise NotImplementedError("only the weight-12 level-1 form is provided")


DELTA = FormSpec()


class CoefficientSeries:
    """Arithmetic sequence values[1..N]; slot 0 is unused and kept at 0."""

    __slots__ = ("values",)

    def __init__(self, values):
        v = np.asarray(values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("series needs values for at least n = 1")
        if v[0] != 0.0:
            v = v.copy()
            v[0] = 0.0
        self.values = v

    @property
    def cutoff(self) -> int:
        return self.values.size - 1

    def __getitem__(self, n: int) -> float:
        return float(self.values[n])

    def truncated(self, n: int) -> "CoefficientSeries":
        if n > self.cutoff:
            raise ValueError("cannot extend a series by truncation")
        return CoefficientSeries(self.values[: n + 1])

    @classmethod
    def delta_unit(cls, n: int) -> "CoefficientSeries":
        v = np.zeros(n + 1)
        v[1] = 1.0
        return cls(v)

    @classmethod
    def ones(cls, n: int) -> "CoefficientSeries":
        v = np.ones(n + 1)
        v[0] = 0.0
        return cls(v)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("n,value\n")
            for n in range(1, self.cutoff + 1):
                fh.write(f"{n},{float(self.values[n])!r}\n")


# ---------------------------------------------------------------------------
# exact q-expansion of the discriminant form
# ---------------------------------------------------------------------------

def _pack(coeffs_idx, coeffs_val, length: int):
    """Pack signed integer coefficients into one gmpy2 integer, base 2^PACK_BITS."""
    pos = bytearray(length * _PACK_BYTES)
    neg = bytearray(length * _PACK_BYTES)
    for idx, val in zip(coeffs_idx, coeffs_val):
        tgt = pos if val > 0 else neg
        tgt[idx * _PACK_BYTES : idx * _PACK_BYTES + _PACK_BYTES] = abs(int(val)).to_bytes(
            _PACK_BYTES, "little"
        )
    return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(int.from_bytes(neg, "little"))


def _unpack(value, length: int) -> list:
    """Inverse of :func:`_pack` for a product of packed polynomials."""
    bias_digit = _HALF.to_bytes(_PACK_BYTES, "little")
    bias = gmpy2.mpz(int.from_bytes(bytes(bias_digit) * length, "little"))
    shifted = int(value + bias)
    raw = shifted.to_bytes(length * _PACK_BYTES + 16, "little", signed=False)
    out = []
    for i in range(length):
        d = int.from_bytes(raw[i * _PACK_BYTES : (i + 1) * _PACK_BYTES], "little")
        out.append(d - _HALF)
    return out

def _eta_pentagonal(n: int):
    """Indices/values of Euler's expansion of prod(1 - q^k) up to q^n."""
    idx = [0]
    val = [1]
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > n and g2 > n:
            break
        s = 1 if k % 2 == 0 else -1
        if g1 <= n:
            idx.append(g1)
            val.append(s)
        if g2 <= n:
            idx.append(g2)
            val.append(s)
        k += 1
    return idx, val


@lru_cache(maxsize=2)
def delta_q_expansion(n: int) -> tuple:
    """Exact tau(1..n) of the discriminant form, as a tuple of ints.

    q-expansion q * prod(1-q^k)^24 via the ladder eta -> eta^2 -> eta^3,
    eta^3 -> eta^6 -> eta^12 -> eta^24; each arrow is one truncated
    polynomial multiplication on packed integers.
    """
    if n < 1:
        raise ValueError("cutoff must be positive")
    length = n  # coefficients of eta^24 up to q^{n-1}
    idx, val = _eta_pentagonal(length - 1)
    eta = _pack(idx, val, length)
    e3 = _truncate(_truncate(eta * eta, length) * eta, length)
    e6 = _truncate(e3 * e3, length)
    e12 = _truncate(e6 * e6, length)
    e24 = _truncate(e12 * e12, length)
    coeffs = _unpack(e24, length)
    return (0, *coeffs[:n])


def _truncate(packed, length: int):
    """Drop packed coefficients at powers >= length (signed-safe)."""
    bias_digit = _HALF.to_bytes(_PACK_BYTES, "little")
    fields = packed.bit_length() // PACK_BITS + 2
    total = max(fields, length) + 1
    bias = gmpy2.mpz(int.from_bytes(bytes(bias_digit) * total, "little"))
    shifted = packed + bias
    if shifted < 0:
        raise OverflowError("packed coefficient exceeded field width")
    keep = shifted & ((gmpy2.mpz(1) << (length * PACK_BITS)) - 1)
    low_bias = gmpy2.mpz(int.from_bytes(bytes(bias_digit) * length, "little"))
    return keep - low_bias


@lru_cache(maxsize=2)
def _lambda_values(n: int) -> np.ndarray:
    tau = delta_q_expansion(n)
    k = np.arange(n + 1, dtype=float)
    k[0] = 1.0
    vals = np.fromiter((float(t) for t in tau), dtype=float, count=n + 1) / k ** 5.5
    vals.setflags(write=False)
    return vals


def lambda_series(form: FormSpec, n: int) -> CoefficientSeries:
    """lambda(k) = tau(k)/k^{11/2} for k <= n (float64)."""
    if form != DELTA:
        raise NotImplementedError("only the discriminant form is provided")
    return CoefficientSeries(_lambda_values(n).copy())


# ---------------------------------------------------------------------------
# Dirichlet ring
# ---------------------------------------------------------------------------

def dirichlet_convolve(a: CoefficientSeries, b: CoefficientSeries) -> CoefficientSeries:
    if a.cutoff != b.cutoff:
        raise ValueError("series must share a cutoff")
    return CoefficientSeries(dirichlet_convolve_f64(a.values, b.values))


def dirichlet_power(a: CoefficientSeries, k: int) -> CoefficientSeries:
    if k < 0:
        raise ValueError("negative powers: invert first")
    out = CoefficientSeries.delta_unit(a.cutoff)
    base = a
    while k:
        if k & 1:
            out = dirichlet_convolve(out, base)
        k >>= 1
        if k:
            base = dirichlet_convolve(base, base)
    return out


def dirichlet_inverse(a: CoefficientSeries) -> CoefficientSeries:
    if a[1] == 0.0:
        raise ZeroDivisionError("series with a[1] = 0 has no Dirichlet inverse")
    return CoefficientSeries(dirichlet_inverse_f64(a.values))


def mollifier_mu_series(form: FormSpec, ell: int, n: int) -> CoefficientSeries:
    """Coefficients of 1/L^ell: the ell-fold convolution of the inverse of lambda."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    mu1 = dirichlet_inverse(lambda_series(form, n))
    return dirichlet_power(mu1, ell)


def sigma_shift(form: FormSpec, alpha: float, beta: float, n: int) -> CoefficientSeries:
    """sigma(l) = sum_{ab=l} a^{-alpha} b^{beta} lambda(a) lambda(b)."""
    lam = lambda_series(form, n)
    k = np.arange(n + 1, dtype=float)
    k[0] = 1.0
    left = CoefficientSeries(lam.values * k ** (-alpha))
    right = CoefficientSeries(lam.values * k ** beta)
    return dirichlet_convolve(left, right)


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    max_deviation: float
    checks: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        return (
            f"[{status}] {self.name}: {self.checks} checks, "
            f"max deviation {self.max_deviation:.3e} (tol {self.tolerance:.1e})"
        )


def verify_hecke(form: FormSpec, n: int) -> CheckReport:
    """Both multiplicative relations, exact in integer tau-space, for mn <= n.

    tau(m) tau(n) = sum_{d | (m,n)} d^11 tau(mn/d^2)
    tau(mn)       = sum_{d | (m,n)} mobius(d) d^11 tau(m/d) tau(n/d)
    """
    tau = delta_q_expansion(n)
    mob = [int(v) for v in _mobius_sieve(int(math.isqrt(n)) + 1)]
    worst = 0
    checks = 0
    for m in range(1, n + 1):
        for k in range(1, n // m + 1):
            rhs1 = 0
            rhs2 = 0
            g = math.gcd(m, k)
            for d in range(1, g + 1):
                if g % d:
                    continue
                rhs1 += d ** 11 * tau[m * k // (d * d)]
                rhs2 += mob[d] * d ** 11 * tau[m // d] * tau[k // d]
            dev = max(abs(tau[m] * tau[k] - rhs1), abs(tau[m * k] - rhs2))
            if dev > worst:
                worst = dev
            checks += 2
    return CheckReport("hecke relations (exact tau)", float(worst), checks, 0.0)


def _mobius_sieve(n: int) -> np.ndarray:
    mob = np.ones(n + 1, dtype=np.int64)
    primes = []
    comp = np.zeros(n + 1, dtype=bool)
    for i in range(2, n + 1):
        if not comp[i]:
            primes.append(i)
            mob[i] = -1
        for p in primes:
            if i * p > n:
                break
            comp[i * p] = True
            if i % p == 0:
                mob[i * p] = 0
                break
            mob[i * p] = -mob[i]
    mob[0] = 0
    return mob


def verify_deligne_bound(form: FormSpec, n: int) -> CheckReport:
    """|lambda(k)| <= d(k) for k <= n (divisor-count bound)."""
    lam = lambda_series(form, n)
    divisor_count = np.zeros(n + 1)
    for d in range(1, n + 1):
        divisor_count[d::d] += 1
    excess = np.abs(lam.values[1:]) - divisor_count[1:]
    return CheckReport("eigenvalue divisor bound", float(max(excess.max(), 0.0)), n, 0.0)


def verify_unit_identities(form: FormSpec, ell: int, n: int, tol: float = 1e-9) -> list:
    """Convolution identities that make the mollifier an approximate inverse.

    (mu_ell * lambda^{*(ell-1)} * lambda)[j]   = 1 if j == 1 else 0
    (mu_{ell+1} * lambda^{*(ell-1)} * sigma00)[j] = 1 if j == 1 else 0
    where sigma00 = lambda * lambda.
    """
    lam = lambda_series(form, n)
    delta = CoefficientSeries.delta_unit(n)
    reports = []

    mu_ell = mollifier_mu_series(form, ell, n)
    conv = dirichlet_convolve(
        dirichlet_convolve(mu_ell, dirichlet_power(lam, ell - 1)), lam
    )
    dev = float(np.abs(conv.values - delta.values).max())
    reports.append(CheckReport(f"mu_{ell} * lambda^*({ell-1}) * lambda = unit", dev, n, tol))

    mu_next = mollifier_mu_series(form, ell + 1, n)
    sigma00 = sigma_shift(form, 0.0, 0.0, n)
    conv2 = dirichlet_convolve(
        dirichlet_convolve(mu_next, dirichlet_power(lam, ell - 1)), sigma00
    )
    dev2 = float(np.abs(conv2.values - delta.values).max())
    reports.append(
        CheckReport(f"mu_{ell+1} * lambda^*({ell-1}) * (lambda*lambda) = unit", dev2, n, tol)
    )
    return reports


def rankin_constant(form: FormSpec, x: int):
    """Empirical mean of lambda(n)^2: partial-sum estimates at x/4, x/2, x."""
    if x < 1000:
        raise ValueError("cutoff too small for a meaningful mean estimate")
    lam = lambda_series(form, x)
    sums = weighted_partial_sums(lam.values, lam.values)
    estimates = [(m, sums[m - 1] / m) for m in (x // 4, x // 2, x)]
    return estimates[-1][1], estimates


def lemma8_check(f_values: np.ndarray, c: float, k: int, m: int) -> dict:
    """Partial sums of the k-fold convolution against the predicted main terms.

    For a series with mean c (sum_{j<=M} f(j) ~ c M):
      sum_{j<=M} (f^{*k})(j)   ~ c^k M log^{k-1} M / (k-1)!
      sum_{j<=M} (f^{*k})(j)/j ~ c^k log^k M / k!
    (For f = 1 these are the classical k-dimensional divisor asymptotics,
    which fixes the factorial normalization.)  Returns the two
    observed/predicted ratios; convergence is logarithmic, so the ratios
    approach 1 slowly.
    """
    if k < 1 or k > 3:
        raise ValueError("k must be 1, 2, or 3")
    if m > f_values.size - 1:
        raise ValueError("cutoff exceeds series length")
    conv = f_values
    for _ in range(k - 1):
        conv = dirichlet_convolve_f64(conv, f_values)
    ones = np.ones_like(conv)
    plain = weighted_partial_sums(conv, ones)[m - 1]
    recip = np.arange(conv.size, dtype=float)
    recip[0] = 1.0
    harmonic = weighted_partial_sums(conv, 1.0 / recip)[m - 1]
    lm = math.log(m)
    pred_plain = c ** k * m * lm ** (k - 1) / math.factorial(k - 1)
    pred_harmonic = c ** k * lm ** k / math.factorial(k)
    return {
        "plain_ratio": plain / pred_plain,
        "harmonic_ratio": harmonic / pred_harmonic,
        "plain": plain,
        "harmonic": harmonic,
    }
