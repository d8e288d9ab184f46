import cmath
import math

import numpy as np
import pytest
from conftest import naive_gamma, naive_theta0, rel
from hypothesis import given, settings
from hypothesis import strategies as st

from gammagerbe.special import (
    DegenerateModuliError,
    DomainError,
    EvalConfig,
    ModuliPoint,
    PoleError,
    chart_form,
    elliptic_gamma,
    elliptic_gamma_eval,
    in_domain,
    theta0,
    theta0_eval,
)


def _upper(rng, lo=0.4, hi=1.5):
    return complex(rng.uniform(-0.5, 0.5), rng.uniform(lo, hi))


def _points(rng, n):
    for _ in range(n):
        tau, sigma = _upper(rng), _upper(rng)
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3)) + 0.5 * (tau + sigma)
        yield z, tau, sigma


def test_theta0_half_at_i_against_direct_product():
    want = 2.0
    for j in range(1, 31):
        want *= (1 + math.exp(-2 * math.pi * j)) ** 2
    got = theta0(0.5, 1j)
    assert abs(got.imag) < 1e-15
    assert rel(got, want) < 1e-14


def test_theta0_matches_naive(rng):
    for _ in range(20):
        tau = _upper(rng, 0.3, 2.0)
        z = complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5) * tau.imag)
        assert rel(theta0(z, tau), naive_theta0(z, tau)) < 1e-12


def test_theta0_quasi_periodicity(rng):
    for _ in range(20):
        tau = _upper(rng, 0.3, 2.0)
        z = complex(rng.uniform(-1, 1), rng.uniform(-0.3, 0.3))
        t = theta0(z, tau)
        assert rel(theta0(z + 1, tau), t) < 1e-10
        assert rel(theta0(z + tau, tau), -cmath.exp(-2j * math.pi * z) * t) < 1e-10


def test_theta0_zero_flag_and_domain():
    ev = theta0_eval(0.0, 1j)
    assert ev.zero_hit and abs(ev.value) < 1e-12
    assert not theta0_eval(0.3, 1j).zero_hit
    with pytest.raises(DomainError):
        theta0(0.1, -1j)
    with pytest.raises(DomainError):
        theta0(0.1, 2.0)


def test_gamma_matches_naive_double_product(rng):
    for z, tau, sigma in _points(rng, 10):
        assert rel(elliptic_gamma(z, tau, sigma), naive_gamma(z, tau, sigma)) < 1e-11


def test_gamma_shift_law(rng):
    for z, tau, sigma in _points(rng, 20):
        lhs = elliptic_gamma(z + sigma, tau, sigma)
        rhs = naive_theta0(z, tau) * elliptic_gamma(z, tau, sigma)
        assert rel(lhs, rhs) < 1e-9


def test_gamma_reflection_and_symmetry(rng):
    for z, tau, sigma in _points(rng, 20):
        g = elliptic_gamma(z, tau, sigma)
        assert abs(g * elliptic_gamma(tau + sigma - z, tau, sigma) - 1) < 1e-9
        assert rel(elliptic_gamma(z, sigma, tau), g) < 1e-9


def test_continuation_satisfies_shift_law(rng):
    # lower-half-plane sigma: the continued function must obey the same law
    for z, tau, sigma in _points(rng, 20):
        s = -sigma
        lhs = elliptic_gamma(z + s, tau, s)
        rhs = theta0(z, tau) * elliptic_gamma(z, tau, s)
        assert rel(lhs, rhs) < 1e-9
        assert rel(elliptic_gamma(z, tau, s), 1 / naive_gamma(z - s, tau, -s)) < 1e-11


def test_continuation_in_both_periods(rng):
    for z, tau, sigma in _points(rng, 10):
        assert rel(elliptic_gamma(z, -tau, -sigma), elliptic_gamma(z, -sigma, -tau)) < 1e-12
        # the rule applied once in each period
        want = elliptic_gamma(z + tau + sigma, tau, sigma)
        assert rel(elliptic_gamma(z, -tau, -sigma), want) < 1e-11


def test_gamma_domain_and_pole():
    with pytest.raises(DomainError):
        elliptic_gamma(0.1, 1.0, 1j)
    with pytest.raises(PoleError) as info:
        elliptic_gamma(0.0, 1j, 1.1j)
    assert info.value.context["j"] == 0 and info.value.context["k"] == 0
    with pytest.raises(PoleError):
        elliptic_gamma(-(1j + 0.2) - 2 * (0.9j - 0.1), 1j + 0.2, 0.9j - 0.1)


def test_truncation_soundness(rng):
    loose = EvalConfig(tol=1e-8)
    tight = EvalConfig(tol=5e-9)
    for z, tau, sigma in _points(rng, 50):
        a = elliptic_gamma_eval(z, tau, sigma, loose)
        b = elliptic_gamma_eval(z, tau, sigma, tight)
        assert rel(b.value, a.value) <= a.err
        t1 = theta0_eval(z, tau, loose)
        t2 = theta0_eval(z, tau, tight)
        assert rel(t2.value, t1.value) <= t1.err


def test_error_bound_covers_reference(rng):
    for z, tau, sigma in _points(rng, 10):
        ev = elliptic_gamma_eval(z, tau, sigma, EvalConfig(tol=1e-6))
        ref = elliptic_gamma(z, tau, sigma, EvalConfig(tol=1e-16))
        assert rel(ev.value, ref) <= ev.err


def test_config_validation(monkeypatch):
    with pytest.raises(ValueError):
        EvalConfig(tol=2.0)
    with pytest.raises(ValueError):
        EvalConfig(max_terms=0)
    with pytest.raises(ValueError):
        EvalConfig(pole_eps=-1.0)
    monkeypatch.setenv("GGL_DEFAULT_TOL", "1e-12")
    assert EvalConfig().tol == 1e-12


def test_in_domain_standard_point():
    for tau, sigma in [(0.1 + 1j, 0.3 + 0.5j), (0.1 + 1j, 0.3 - 0.5j), (-0.4 - 1j, 0.2 + 2j)]:
        assert in_domain((1, 0, 0), (tau, sigma, 1)) == (sigma.imag > 0)


def test_in_domain_real_x_false():
    for a in [(1, 0, 0), (0, 1, 0), (2, 3, 5), (-1, 1, 1)]:
        assert not in_domain(a, (1, 2, 3))


def test_chart_form_basis_independence(rng):
    # Im(a'x conj(b'x)) = det * Im(ax conj(bx)) for (a', b') = M (a, b)
    from gammagerbe.lattice import dot, framing

    for a in [(1, 0, 0), (2, 3, 5), (1, -1, 2)]:
        fr = framing(a)
        for _ in range(10):
            x = tuple(complex(*rng.normal(size=2)) for _ in range(3))
            m = rng.integers(-3, 4, size=(2, 2))
            det = int(round(np.linalg.det(m)))
            if det <= 0:
                continue
            p = tuple(m[0, 0] * fr.alpha2[i] + m[0, 1] * fr.alpha3[i] for i in range(3))
            q = tuple(m[1, 0] * fr.alpha2[i] + m[1, 1] * fr.alpha3[i] for i in range(3))
            val = (dot(p, x) * dot(q, x).conjugate()).imag
            assert math.isclose(val, det * chart_form(a, x), rel_tol=1e-12, abs_tol=1e-12)


@settings(max_examples=20, deadline=None)
@given(
    st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False),
    st.sampled_from([(1, 0, 0), (0, 1, 0), (2, 3, 5), (1, -2, 1)]),
)
def test_in_domain_scale_invariant(lam, a):
    x = (0.3 + 1.1j, -0.7 + 0.4j, 1.0 + 0.2j)
    assert in_domain(a, x) == in_domain(a, tuple(lam * c for c in x))


def test_moduli_point():
    p = ModuliPoint(0.1, (1j, 0.5 + 0.3j, 1))
    assert p.scaled(2j).x[0] == -2
    with pytest.raises(DegenerateModuliError):
        ModuliPoint(0.0, (1j, 2j, 3j))
    with pytest.raises(DegenerateModuliError):
        ModuliPoint(0.0, (1, 2, 3))
