import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cuspmoll import hecke
from cuspmoll.hecke import (
    CoefficientSeries,
    DELTA,
    delta_q_expansion,
    dirichlet_convolve,
    dirichlet_inverse,
    dirichlet_power,
    lambda_series,
    lemma8_check,
    mollifier_mu_series,
    rankin_constant,
    sigma_shift,
    verify_deligne_bound,
    verify_hecke,
    verify_unit_identities,
)


def _naive_eta24_q(n):
    """Independent oracle: expand q * prod(1-q^k)^24 by direct multiplication."""
    poly = np.zeros(n, dtype=np.int64)
    poly[0] = 1
    for k in range(1, n):
        # multiply by (1 - q^k) twenty-four times
        for _ in range(24):
            poly[k:] -= poly[: n - k].copy()[: poly[k:].size]
    tau = np.zeros(n + 1, dtype=np.int64)
    tau[1:] = poly[: n]
    return tau


def test_tau_against_naive_expansion():
    n = 60
    naive = _naive_eta24_q(n)
    fast = delta_q_expansion(n)
    assert list(naive[1:]) == list(fast[1:])


def test_tau_rejects_bad_cutoff():
    with pytest.raises(ValueError, match="positive"):
        delta_q_expansion(0)


def test_tau_known_values():
    tau = delta_q_expansion(12)
    assert tau[1] == 1
    assert tau[2] == -24
    assert tau[3] == 252
    assert tau[4] == -1472
    assert tau[5] == 4830
    assert tau[6] == -6048
    assert tau[12] == -370944


def test_tau_multiplicative_instance():
    tau = delta_q_expansion(100)
    assert tau[6] == tau[2] * tau[3]
    assert tau[2] ** 2 == tau[4] + 2 ** 11 * tau[1]


def test_lambda_normalization(lambda_100k):
    assert lambda_100k[1] == 1.0
    assert lambda_100k[2] == pytest.approx(-24.0 / 2 ** 5.5, rel=1e-14)


def test_deligne_bound_100k(lambda_100k):
    rep = verify_deligne_bound(DELTA, 100_000)
    assert rep.passed, str(rep)


def test_hecke_relations_exact():
    rep = verify_hecke(DELTA, 10_000)
    assert rep.max_deviation == 0
    assert rep.passed


def test_lambda_multiplicative_coprime():
    lam = lambda_series(DELTA, 1000)
    for m in (2, 3, 4, 5, 7, 9, 25):
        for k in (3, 7, 11, 13):
            if math.gcd(m, k) != 1 or m * k > 1000:
                continue
            assert lam[m * k] == pytest.approx(lam[m] * lam[k], rel=1e-12, abs=1e-12)


def test_divisor_count_example():
    ones = CoefficientSeries.ones(100)
    d = dirichlet_convolve(ones, ones)
    assert d[12] == 6
    assert d[1] == 1


def test_delta_is_unit(rng):
    vals = np.zeros(257)
    vals[1:] = rng.normal(size=256)
    a = CoefficientSeries(vals)
    conv = dirichlet_convolve(a, CoefficientSeries.delta_unit(256))
    assert np.allclose(conv.values, a.values, atol=0, rtol=0)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 40))
def test_ring_axioms_exact_integers(n):
    rng = np.random.default_rng(n)
    a = np.zeros(n + 1)
    b = np.zeros(n + 1)
    c = np.zeros(n + 1)
    a[1:] = rng.integers(-5, 6, size=n)
    b[1:] = rng.integers(-5, 6, size=n)
    c[1:] = rng.integers(-5, 6, size=n)
    sa, sb, sc = (CoefficientSeries(v) for v in (a, b, c))
    ab_c = dirichlet_convolve(dirichlet_convolve(sa, sb), sc)
    a_bc = dirichlet_convolve(sa, dirichlet_convolve(sb, sc))
    assert np.array_equal(ab_c.values, a_bc.values)
    assert np.array_equal(
        dirichlet_convolve(sa, sb).values, dirichlet_convolve(sb, sa).values
    )


def test_ring_axioms_floats(rng):
    n = 1000
    a = np.zeros(n + 1)
    b = np.zeros(n + 1)
    a[1:] = rng.normal(size=n)
    b[1:] = rng.normal(size=n)
    sa, sb = CoefficientSeries(a), CoefficientSeries(b)
    left = dirichlet_convolve(sa, sb).values
    right = dirichlet_convolve(sb, sa).values
    assert np.max(np.abs(left - right)) < 1e-12


def test_inverse_identity(rng):
    n = 10_000
    lam = lambda_series(DELTA, n)
    inv = dirichlet_inverse(lam)
    conv = dirichlet_convolve(lam, inv)
    target = CoefficientSeries.delta_unit(n)
    assert np.max(np.abs(conv.values - target.values)) < 1e-10


def test_inverse_requires_unit():
    vals = np.zeros(11)
    vals[2] = 1.0
    with pytest.raises(ZeroDivisionError):
        dirichlet_inverse(CoefficientSeries(vals))


def test_mu_two_constructions():
    """Inverse of the ell-fold power vs ell-fold power of the inverse."""
    n = 10_000
    lam = lambda_series(DELTA, n)
    for ell in (2, 3):
        via_power_inverse = dirichlet_inverse(dirichlet_power(lam, ell))
        via_inverse_power = mollifier_mu_series(DELTA, ell, n)
        dev = np.max(np.abs(via_power_inverse.values - via_inverse_power.values))
        assert dev < 1e-10


def test_mu_at_primes():
    n = 1000
    lam = lambda_series(DELTA, n)
    mu1 = dirichlet_inverse(lam)
    primes = [p for p in range(2, n) if all(p % q for q in range(2, int(p ** 0.5) + 1))]
    for ell in (1, 2, 3):
        mu_ell = mollifier_mu_series(DELTA, ell, n)
        lam_pow = dirichlet_power(lam, ell)
        for p in primes:
            assert mu_ell[p] == pytest.approx(-ell * lam[p], rel=1e-10, abs=1e-12)
            assert lam_pow[p] == pytest.approx(ell * lam[p], rel=1e-10, abs=1e-12)
    for p in primes:
        assert mu1[p] == pytest.approx(-lam[p], rel=1e-12, abs=1e-14)


def test_unit_identities_ell_1_2():
    for rep in verify_unit_identities(DELTA, 1, 10_000, tol=1e-9):
        assert rep.passed, str(rep)
    for rep in verify_unit_identities(DELTA, 2, 10_000, tol=1e-9):
        assert rep.passed, str(rep)


def test_unit_identities_ell_3():
    for rep in verify_unit_identities(DELTA, 3, 1000, tol=1e-8):
        assert rep.passed, str(rep)


def test_sigma_shift_zero_is_square():
    n = 2000
    lam = lambda_series(DELTA, n)
    sq = dirichlet_power(lam, 2)
    sigma = sigma_shift(DELTA, 0.0, 0.0, n)
    assert np.max(np.abs(sigma.values - sq.values)) < 1e-12


def test_sigma_shift_prime_values():
    n = 100
    alpha, beta = 0.03, -0.07
    lam = lambda_series(DELTA, n)
    sigma = sigma_shift(DELTA, alpha, beta, n)
    for p in (2, 3, 5, 7, 11):
        expect = lam[p] * (p ** (-alpha) + p ** beta)
        assert sigma[p] == pytest.approx(expect, rel=1e-12)


def test_sigma_shift_direct_summation():
    n = 100
    alpha, beta = 0.1, 0.05
    lam = lambda_series(DELTA, n)
    sigma = sigma_shift(DELTA, alpha, beta, n)
    for l in range(1, n + 1):
        direct = sum(
            a ** (-alpha) * (l // a) ** beta * lam[a] * lam[l // a]
            for a in range(1, l + 1)
            if l % a == 0
        )
        assert sigma[l] == pytest.approx(direct, rel=1e-11, abs=1e-12)


def test_rankin_mean_stabilizes(lambda_1m):
    mean, estimates = rankin_constant(DELTA, 1_000_000)
    vals = [v for _, v in estimates]
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            assert abs(vals[i] - vals[j]) / vals[j] < 0.05
    assert mean > 0


def test_rankin_degenerate_inputs():
    n = 10_000
    delta_vals = CoefficientSeries.delta_unit(n).values
    assert delta_vals[1:].sum() / n == pytest.approx(1e-4, abs=1e-9)
    ones = CoefficientSeries.ones(n)
    assert ones.values[1:].sum() / n == pytest.approx(1.0, abs=0)


def test_lemma8_divisor_oracle():
    """f = 1 (mean 1), k = 2: partial sums of d(m) against M log M."""
    m = 1_000_000
    ones = np.ones(m + 1)
    ones[0] = 0.0
    res = lemma8_check(ones, 1.0, 2, m)
    # exact oracle for the divisor sum
    d_sum = sum(m // d for d in range(1, m + 1))
    assert res["plain"] == pytest.approx(d_sum, rel=1e-9)
    assert abs(res["plain_ratio"] - 1.0) < 0.15


def test_lemma8_reduces_to_mean_at_k1(lambda_1m):
    m = 100_000
    lam_sq = lambda_1m.values[: m + 1] ** 2
    mean = lam_sq[1:].sum() / m
    res = lemma8_check(lam_sq, mean, 1, m)
    assert res["plain_ratio"] == pytest.approx(1.0, rel=1e-9)


def test_lemma8_lambda_square_trend(lambda_1m):
    mean, _ = rankin_constant(DELTA, 1_000_000)
    lam_sq = lambda_1m.values ** 2
    big = lemma8_check(lam_sq, mean, 2, 1_000_000)
    small = lemma8_check(lam_sq, mean, 2, 10_000)
    assert abs(big["plain_ratio"] - 1.0) < 0.30
    assert abs(big["plain_ratio"] - 1.0) < abs(small["plain_ratio"] - 1.0)


def test_series_csv_export(tmp_path):
    lam = lambda_series(DELTA, 10)
    path = tmp_path / "series.csv"
    lam.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,value"
    assert lines[1].startswith("1,1.0")
    assert len(lines) == 11
