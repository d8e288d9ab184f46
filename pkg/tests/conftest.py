import cmath
import math

import pytest


def e(t):
    return cmath.exp(2j * math.pi * t)


def naive_theta0(z, tau, n=60):
    """Plain truncated product, no log-space tricks."""
    p = 1
    for j in range(n):
        p *= (1 - e((j + 1) * tau - z)) * (1 - e(j * tau + z))
    return p


def naive_gamma(z, tau, sigma, n=60):
    """Square truncation of the double product; periods in the upper half plane only."""
    p = 1
    for j in range(n):
        for k in range(n):
            p *= (1 - e((j + 1) * tau + (k + 1) * sigma - z)) / (1 - e(j * tau + k * sigma + z))
    return p


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20261015)
