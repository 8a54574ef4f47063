import numpy as np
import pytest

from fermicorr.specfun import QuadratureRule


@pytest.fixture(scope="session")
def rule_512():
    return QuadratureRule.gauss_legendre(512)


@pytest.fixture(scope="session")
def rule_768():
    return QuadratureRule.gauss_legendre(768)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
