import numpy as np
import pytest

from bures.measures import Spectrum


def one_sample_ks(values, cdf) -> float:
    """Exact one-sample KS statistic against a callable CDF."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    f = np.asarray([cdf(v) for v in x])
    upper = np.max(np.arange(1, n + 1) / n - f)
    lower = np.max(f - np.arange(0, n) / n)
    return float(max(upper, lower))


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


@pytest.fixture
def spectrum3():
    return Spectrum([0.5, 0.375, 0.125])


@pytest.fixture
def spectrum4():
    return Spectrum([0.4, 0.3, 0.2, 0.1])


@pytest.fixture
def spectrum5():
    return Spectrum([0.35, 0.25, 0.2, 0.15, 0.05])
