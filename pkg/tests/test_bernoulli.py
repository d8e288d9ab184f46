import itertools
import math
from fractions import Fraction as Fr

import numpy as np
import pytest

from gammagerbe import sampling as smp
from gammagerbe.bernoulli import (
    bernoulli_kn,
    bernoulli_numbers,
    h_a,
    h_ab,
    h_metric,
    log_h_metric,
    multiple_bernoulli,
    multiple_bernoulli_coefficients,
)
from gammagerbe.family import delta_args
from gammagerbe.lattice import GroupElement, word

# classical Bernoulli polynomials, constant term first
CLASSICAL = [
    [Fr(1)],
    [Fr(-1, 2), Fr(1)],
    [Fr(1, 6), Fr(-1), Fr(1)],
    [Fr(0), Fr(1, 2), Fr(-3, 2), Fr(1)],
    [Fr(-1, 30), Fr(0), Fr(1), Fr(-2), Fr(1)],
    [Fr(0), Fr(-1, 6), Fr(0), Fr(5, 3), Fr(-5, 2), Fr(1)],
    [Fr(1, 42), Fr(0), Fr(-1, 2), Fr(0), Fr(5, 2), Fr(-3), Fr(1)],
]


def _poly(coeffs, z):
    return sum(c * z**i for i, c in enumerate(coeffs))


def test_bernoulli_numbers():
    assert bernoulli_numbers(8) == (1, Fr(-1, 2), Fr(1, 6), 0, Fr(-1, 30), 0, Fr(1, 42), 0, Fr(-1, 30))


@pytest.mark.parametrize("k", range(7))
@pytest.mark.parametrize("z", [Fr(0), Fr(1, 2), Fr(1), Fr(-2, 3)])
def test_n1_is_classical(k, z):
    bv = bernoulli_kn(k, 1, z)
    assert isinstance(bv.value, Fr)
    assert bv.value == _poly(CLASSICAL[k], z)
    assert list(bv.coefficients) == CLASSICAL[k]


@pytest.mark.parametrize("zeta,t", [(Fr(1, 3), Fr(1, 2)), (Fr(-2), Fr(5, 7)), (Fr(0), Fr(3)), (Fr(7, 4), Fr(-1, 2))])
def test_b12_closed_form(zeta, t):
    assert bernoulli_kn(1, 2, zeta, [t]).value == (2 * zeta - t - 1) / (2 * t)


def test_b33_degree():
    assert bernoulli_kn(3, 3, Fr(1, 5), [Fr(2), Fr(-1, 3)]).degree == 3
    assert bernoulli_kn(3, 3, 0.2, [0.7, 1.3]).degree == 3


def test_float_path_matches_exact():
    ts = [Fr(3, 4), Fr(-5, 3)]
    for k in range(6):
        exact = multiple_bernoulli_coefficients(k, ts)
        approx = multiple_bernoulli_coefficients(k, [float(t) for t in ts])
        assert np.allclose([float(c) for c in exact], approx, rtol=1e-12, atol=1e-12)


def test_period_symmetry():
    ts = [Fr(2, 3), Fr(-1, 4), Fr(5)]
    base = multiple_bernoulli_coefficients(4, ts)
    for perm in itertools.permutations(ts):
        assert multiple_bernoulli_coefficients(4, list(perm)) == base
    assert bernoulli_kn(2, 3, Fr(1, 3), ts[:2]).value == bernoulli_kn(2, 3, Fr(1, 3), ts[1::-1]).value


def test_argument_checks():
    with pytest.raises(ValueError):
        bernoulli_kn(1, 2, 0.3, [0])
    with pytest.raises(ValueError):
        bernoulli_kn(1, 3, 0.3, [1.0])
    with pytest.raises(ValueError):
        log_h_metric(2, 0.3j, [2.0])


def test_h2_unit_period_reading():
    # under the appended-unit-period reading h_2 = exp(-pi (2 zeta - t - 1) / t)
    for zeta, t in [(0.3, 0.8), (-0.2, 1.4), (0.9, 0.5)]:
        want = math.exp(-math.pi * (2 * zeta - t - 1) / t)
        assert math.isclose(h_metric(2, 1j * zeta, [1j * t], "unit-period"), want, rel_tol=1e-13)


def test_h_metric_degree_n_reading():
    # degree-n polynomial with n - 1 periods: B(2; z | t) = z^2 / t - z + t / 6
    for zeta, t in [(0.3, 0.8), (-0.2, 1.4)]:
        b = zeta**2 / t - zeta + t / 6
        assert math.isclose(log_h_metric(2, 1j * zeta, [1j * t]), -2 * math.pi * b, rel_tol=1e-13)
    assert multiple_bernoulli(2, Fr(1, 3), [Fr(1, 2)]) == Fr(1, 9) * 2 - Fr(1, 3) + Fr(1, 12)


@pytest.mark.parametrize("convention,deg_shift", [("degree-n", 0), ("unit-period", -1)])
@pytest.mark.parametrize("n", [2, 3])
def test_log_h_polynomial_in_zeta(convention, deg_shift, n):
    """Exact finite differences: order deg+1 vanishes, order deg does not."""
    ts = [Fr(2, 3), Fr(5, 4)][: n - 1]
    deg = n + deg_shift
    if convention == "degree-n":
        f = lambda z: multiple_bernoulli(n, z, ts)  # noqa: E731
    else:
        f = lambda z: bernoulli_kn(n - 1, n, z, ts).value  # noqa: E731
    vals = [f(Fr(i, 3)) for i in range(deg + 2)]
    diffs = vals
    for _ in range(deg):
        diffs = [q - p for p, q in zip(diffs, diffs[1:])]
    assert diffs[0] != 0
    assert diffs[1] - diffs[0] == 0


def test_h_depends_on_imaginary_parts_only():
    rng = np.random.default_rng(11)
    for _ in range(100):
        z = complex(*rng.normal(size=2))
        taus = [complex(rng.normal(), rng.uniform(0.2, 2)) for _ in range(2)]
        for n in (2, 3):
            h = h_metric(n, z, taus[: n - 1])
            assert h > 0 and math.isfinite(h)
            shifted = h_metric(n, z + 0.37, [t - 1.3 for t in taus[: n - 1]])
            assert math.isclose(shifted, h, rel_tol=1e-13)


def test_h_ab_recovers_h3():
    rng = np.random.default_rng(12)
    for _ in range(10):
        tau, sigma = smp.standard_periods(rng)
        z = smp.w_disc(rng)
        assert math.isclose(h_ab((1, 0, 0), (0, 1, 0), z, (tau, sigma, 1)), h_metric(3, z, [tau, sigma]), rel_tol=1e-13)
    assert h_ab((1, 2, 3), (1, 2, 3), 0.1, (1j, 0.3 + 2j, 1)) == 1.0


def test_h_a_identity_and_pairing():
    x = (0.2 + 1j, 0.1 + 0.8j, 1)
    assert h_a((1, 0, 0), GroupElement(), 0.1, x) == 1.0
    rng = np.random.default_rng(13)
    for _ in range(50):
        g = word([int(i) for i in rng.integers(0, 18, size=4)])
        n, args = delta_args((1, 0, 0), g, 0.1, x)
        assert len(args) == abs(n)
        assert h_a((1, 0, 0), g, 0.1, x) > 0


def test_h_a_homogeneity():
    rng = np.random.default_rng(14)
    x = (0.2 + 1j, 0.1 + 0.8j, 1)
    g = GroupElement(((1, 0, 0), (1, 1, 0), (0, 0, 1)), (2, -1, 1))
    base = h_a((1, 0, 0), g, 0.1 + 0.1j, x)
    for _ in range(20):
        lam = complex(*rng.normal(size=2))
        got = h_a((1, 0, 0), g, lam * (0.1 + 0.1j), tuple(lam * c for c in x))
        assert math.isclose(got, base, rel_tol=1e-12)
