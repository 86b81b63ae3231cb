import functools

import pytest

from slepian import DiscreteParams, nystrom_spectrum, spectrum


@functools.lru_cache(maxsize=None)
def cached_spectrum(N, W, method="tridiag"):
    return spectrum(DiscreteParams(N, W), method=method)


@functools.lru_cache(maxsize=None)
def cached_nystrom(c, M=None, check=False):
    return nystrom_spectrum(c, M, check_convergence=check)


@pytest.fixture(scope="session")
def get_spectrum():
    return cached_spectrum


@pytest.fixture(scope="session")
def get_nystrom():
    return cached_nystrom


@pytest.fixture(scope="session")
def spec60_03(get_spectrum):
    return get_spectrum(60, 0.3)
