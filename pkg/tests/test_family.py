import cmath
import math

import numpy as np
import pytest
from conftest import naive_theta0, rel

from gammagerbe import sampling as smp
from gammagerbe.family import (
    delta,
    delta_count,
    gamma_ab,
    gamma_ab_cone,
    gamma_ab_factors,
)
from gammagerbe.lattice import GroupElement, annihilator_pair, dot, framing, primitive_gamma, word
from gammagerbe.special import DegenerateModuliError, DomainError, elliptic_gamma


def _samples(n, seed, k=2):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        x = smp.moduli_x(rng)
        try:
            vecs = smp.chart_vectors(rng, x, k)
        except LookupError:
            continue
        if smp.conditioned(vecs, x):
            out.append(pytest.param(tuple(vecs), smp.w_disc(rng), x, id=f"s{len(out)}"))
    return out


def test_recovery():
    rng = np.random.default_rng(3)
    for _ in range(20):
        tau, sigma = smp.standard_periods(rng)
        z = smp.w_disc(rng) + 0.3 * (tau + sigma)
        assert rel(gamma_ab((1, 0, 0), (0, 1, 0), z, (tau, sigma, 1)), elliptic_gamma(z, tau, sigma)) < 1e-12


def test_trivial_pairs():
    x = (0.2 + 1j, 0.1 + 0.8j, 1)
    for a in [(1, 0, 0), (2, 3, 5), (-1, 1, 1)]:
        assert gamma_ab(a, a, 0.1, x) == 1
        assert gamma_ab(a, tuple(-c for c in a), 0.1, x) == 1


@pytest.mark.parametrize("vecs,w,x", _samples(50, 1))
def test_antisymmetry(vecs, w, x):
    a, b = vecs
    assert abs(gamma_ab(a, b, w, x) * gamma_ab(b, a, w, x) - 1) < 1e-9


@pytest.mark.parametrize("vecs,w,x", _samples(10, 2))
def test_choice_independence(vecs, w, x):
    a, b = vecs
    alpha, beta = annihilator_pair(a, b)
    gamma, _ = primitive_gamma(a, b)
    # other valid annihilators: multiples plus anything in Z gamma
    alpha2 = tuple(2 * p + q for p, q in zip(alpha, gamma))
    beta2 = tuple(p - 3 * q for p, q in zip(beta, gamma))
    args, _ = gamma_ab_factors(a, b, w, x, alpha2, beta2)
    assert len(args) > 1
    assert rel(gamma_ab(a, b, w, x, alpha=alpha2, beta=beta2), gamma_ab(a, b, w, x)) < 1e-9


@pytest.mark.parametrize("vecs,w,x", _samples(20, 3))
def test_homogeneity(vecs, w, x):
    a, b = vecs
    rng = np.random.default_rng([abs(c) for v in vecs for c in v])
    lam = rng.uniform(0.3, 3) * cmath.exp(2j * math.pi * rng.uniform())
    xs = tuple(lam * c for c in x)
    assert rel(gamma_ab(a, b, lam * w, xs), gamma_ab(a, b, w, x)) < 1e-9
    g = word([int(i) for i in rng.integers(0, 18, size=3)])
    try:
        d = delta(a, g, w, x)
    except DomainError:
        return
    assert rel(delta(a, g, lam * w, xs), d) < 1e-9


@pytest.mark.parametrize("vecs,w,x", _samples(25, 4))
def test_dual_path(vecs, w, x):
    a, b = vecs
    rep = gamma_ab_cone(a, b, w, x)
    assert rep.converged
    assert rep.terms_used > 0
    assert rel(rep.value, gamma_ab(a, b, w, x)) < 1e-8
    back = gamma_ab_cone(b, a, w, x)
    assert abs(rep.value * back.value - 1) < 1e-8


def test_cone_not_convergent_marker():
    # x = (tau, sigma, 1) lies in U_{e1}^+ but not in U_{e2}^+
    x = (0.2 + 1j, 0.1 + 0.8j, 1)
    rep = gamma_ab_cone((1, 0, 0), (0, 1, 0), 0.1, x)
    assert not rep.converged and rep.value is None
    assert min(rep.edge_decay) <= 0
    assert rep.terms_used == 0


def test_cone_trivial_and_degenerate():
    assert gamma_ab_cone((1, 0, 0), (1, 0, 0), 0.1, (1j, 2j, 1)).value == 1
    with pytest.raises(DegenerateModuliError):
        gamma_ab((1, 0, 0), (0, 1, 0), 0.1, (1j, 0.5j, 0))


def test_delta_identity_is_one():
    assert delta((2, 3, 5), GroupElement(), 0.3, (0.2 + 1j, 0.1 + 0.8j, 1)) == 1


def test_delta_single_factor():
    rng = np.random.default_rng(5)
    for _ in range(10):
        tau, sigma = smp.standard_periods(rng)
        w = smp.w_disc(rng)
        g = GroupElement(mu=(1, 0, 0))
        assert delta_count((1, 0, 0), g) == 1
        assert rel(delta((1, 0, 0), g, w, (tau, sigma, 1)), naive_theta0(w, sigma)) < 1e-12


def test_delta_count_uses_inverse():
    g = GroupElement(((1, 1, 0), (0, 1, 0), (0, 0, 1)), (0, 5, 0))
    # g^{-1} e2 = (-1, 1, 0), so mu(g^{-1} e2) = 5
    assert delta_count((0, 1, 0), g) == 5


@pytest.mark.parametrize("n", range(-2, 4))
@pytest.mark.parametrize("m", range(-2, 4))
def test_delta_concatenation(n, m):
    a = (2, 3, 5)
    fr = framing(a)
    x = (0.3 + 0.9j, -0.2 + 0.4j, 0.5 + 1.1j)
    if (dot(fr.alpha2, x) / dot(fr.alpha3, x)).imag <= 0:
        x = tuple(c.conjugate() for c in x)
    w = 0.1 + 0.05j
    ga = GroupElement(mu=tuple(n * c for c in fr.alpha1))
    gb = GroupElement(mu=tuple(m * c for c in fr.alpha1))
    gab = GroupElement(mu=tuple((n + m) * c for c in fr.alpha1))
    assert delta_count(a, ga) == n
    lhs = delta(a, gab, w, x)
    rhs = delta(a, ga, w, x) * delta(a, gb, w + n * dot(fr.alpha1, x), x)
    assert rel(lhs, rhs) < 1e-10


def test_delta_domain_error():
    # wrong orientation of alpha2(x) / alpha3(x) for a = e1
    with pytest.raises(DomainError):
        delta((1, 0, 0), GroupElement(mu=(1, 0, 0)), 0.1, (1j, -0.5j + 0.1, 1))
