import numpy as np
import pytest

from cuspmoll import hecke


@pytest.fixture(scope="session")
def tau_10k():
    return hecke.delta_q_expansion(10_000)


@pytest.fixture(scope="session")
def lambda_100k():
    return hecke.lambda_series(hecke.DELTA, 100_000)


@pytest.fixture(scope="session")
def lambda_1m():
    return hecke.lambda_series(hecke.DELTA, 1_000_000)


@pytest.fixture()
def rng():
    # fresh generator per test so outcomes stay order-independent
    return np.random.default_rng(20240817)
