"""The gamma family Gamma_{a,b} and the theta cocycle Delta_a."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import _kernels
from .lattice import (
    ConeBasis,
    Framing,
    GroupElement,
    Vec,
    annihilator_pair,
    as_vec,
    cone_basis,
    dot,
    framing,
    fundamental_set,
    is_primitive,
    neg,
    primitive_gamma,
)
from .special import (
    DegenerateModuliError,
    DomainError,
    EvalConfig,
    Evaluation,
    PoleError,
    ZeroHitError,
    _cfg,
    _exp,
    _rel_err,
    elliptic_gamma_log,
    theta0_eval,
)


@dataclass(frozen=True)
class PairData:
    """Everything the factorised evaluator needs for one ordered pair."""

    a: Vec
    b: Vec
    gamma: Vec
    s: int
    alpha: Vec
    beta: Vec
    fset: tuple[Vec, ...]


@lru_cache(maxsize=4096)
def _pair_data(a: Vec, b: Vec, alpha: Vec | None = None, beta: Vec | None = None) -> PairData:
    gamma, s = primitive_gamma(a, b)
    if alpha is None or beta is None:
        ca, cb = annihilator_pair(a, b)
        alpha = ca if alpha is None else alpha
        beta = cb if beta is None else beta
    fset = tuple(fundamental_set(a, b, alpha, beta))
    return PairData(a, b, gamma, s, alpha, beta, fset)


def pair_data(a, b, alpha=None, beta=None) -> PairData:
    return _pair_data(
        as_vec(a),
        as_vec(b),
        None if alpha is None else as_vec(alpha),
        None if beta is None else as_vec(beta),
    )


@lru_cache(maxsize=4096)
def _framing(a: Vec) -> Framing:
    return framing(a)


def _scale(x: Sequence[complex]) -> float:
    return max(abs(c) for c in x)


def _trivial_pair(a: Vec, b: Vec) -> bool:
    if not (is_primitive(a) and is_primitive(b)):
        raise ValueError(f"a={a} and b={b} must be primitive")
    return a == b or a == neg(b)


def gamma_ab_factors(a, b, w, x, alpha=None, beta=None):
    """Arguments ``(z, tau, sigma)`` of the ordinary gamma factors, one per class of F."""
    pd = pair_data(a, b, alpha, beta)
    x = tuple(complex(c) for c in x)
    gx = dot(pd.gamma, x)
    if abs(gx) <= 1e-12 * _scale(x):
        raise DegenerateModuliError("gamma(x) vanishes", a=pd.a, b=pd.b)
    tau = dot(pd.alpha, x) / gx
    sigma = dot(pd.beta, x) / gx
    return [((w + dot(d, x)) / gx, tau, sigma) for d in pd.fset], pd


def gamma_ab_log(a, b, w, x, cfg: EvalConfig | None = None, alpha=None, beta=None):
    """``(log Gamma_{a,b}(w, x), relative error bound)`` via the factorised form."""
    cfg = _cfg(cfg)
    a, b = as_vec(a), as_vec(b)
    if _trivial_pair(a, b):
        return 0j, 0.0
    args, pd = gamma_ab_factors(a, b, complex(w), x, alpha, beta)
    total, err = 0j, 0.0
    for d, (z, tau, sigma) in zip(pd.fset, args):
        try:
            s, e, _ = elliptic_gamma_log(z, tau, sigma, cfg)
        except PoleError as exc:
            exc.context.update(a=a, b=b, delta=d)
            raise
        total += s
        err += e
    return total, err


def gamma_ab_eval(a, b, w, x, cfg=None, alpha=None, beta=None) -> Evaluation:
    s, err = gamma_ab_log(a, b, w, x, cfg, alpha, beta)
    return Evaluation(_exp(s), err)


def gamma_ab(a, b, w, x, cfg: EvalConfig | None = None, alpha=None, beta=None) -> complex:
    """Gamma_{a,b}(w, x) as the finite product of ordinary elliptic gamma functions

    ``prod_{d in F / Z gamma} Gamma((w + d(x)) / gamma(x), alpha(x) / gamma(x), beta(x) / gamma(x))``

    using the canonical annihilator pair unless ``alpha``/``beta`` are given.
    """
    return gamma_ab_eval(a, b, w, x, cfg, alpha, beta).value


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeProductReport:
    value: complex | None
    terms_used: int
    edge_decay: tuple[float, float]
    err: float = math.inf
    shells: int = 0

    @property
    def converged(self) -> bool:
        return self.value is not None


def cone_decay(cb: ConeBasis, x: Sequence[complex]) -> tuple[float, float]:
    """Decay rates of the factor moduli along the ``d(a)`` and ``-d(b)`` edges.

    ``Im(d(x) / gamma(x)) = p d(a) + q d(b)``; the rates are ``(-2 pi p, 2 pi q)``.
    """
    gx = dot(cb.gamma, x)
    u1 = dot(cb.gen1, x) / gx
    u2 = dot(cb.gen2, x) / gx
    q = u2.imag / cb.h22
    p = (u1.imag - cb.h21 * q) / cb.h11
    return -2.0 * math.pi * p, 2.0 * math.pi * q


def gamma_ab_cone(a, b, w, x, cfg: EvalConfig | None = None) -> ConeProductReport:
    """Gamma_{a,b}(w, x) straight from the two cone products.

    Factors ``1 - e^{-2 pi i (d(x) - w) / gamma(x)}`` over ``d(a) > 0, d(b) <= 0``
    and inverse factors ``1 - e^{2 pi i (d(x) - w) / gamma(x)}`` over
    ``d(a) <= 0, d(b) > 0``, all modulo ``Z gamma``, enumerated in L-infinity
    shells of ``(d(a), d(b))``.  No value is produced unless both edge decay
    rates are positive.
    """
    cfg = _cfg(cfg)
    a, b = as_vec(a), as_vec(b)
    if _trivial_pair(a, b):
        return ConeProductReport(1 + 0j, 0, (math.inf, math.inf), 0.0)
    cb = cone_basis(a, b)
    x = tuple(complex(c) for c in x)
    gx = dot(cb.gamma, x)
    if abs(gx) <= 1e-12 * _scale(x):
        raise DegenerateModuliError("gamma(x) vanishes", a=a, b=b)
    decay = cone_decay(cb, x)
    if not (decay[0] > 0 and decay[1] > 0):
        return ConeProductReport(None, 0, decay)
    u1 = dot(cb.gen1, x) / gx
    u2 = dot(cb.gen2, x) / gx
    wg = complex(w) / gx
    wg = complex(wg.real - math.floor(wg.real + 0.5), wg.imag)
    rho = math.exp(-min(decay))
    cbound = math.exp(2.0 * math.pi * abs(wg.imag))
    s, trunc, n, minden, shells, mag = _kernels.cone_logsum(
        u1, u2, wg, cb.h11, cb.h21, cb.h22, rho, cbound, cfg.tol, cfg.max_terms
    )
    if minden < cfg.pole_eps:
        raise PoleError("cone product hit a pole", a=a, b=b, w=w)
    if math.isinf(trunc):
        return ConeProductReport(None, n, decay, math.inf, shells)
    return ConeProductReport(_exp(s), n, decay, _rel_err(s, trunc, mag, n), shells)


# --------------------------------------------------------------------------


def delta_count(a, ghat: GroupElement) -> int:
    """Number of theta factors in Delta_a(ghat): ``mu(g^{-1} a)``."""
    return dot(ghat.mu, ghat.pull_vector(as_vec(a)))


def delta_args(a, ghat: GroupElement, w, x):
    """``(n, [(z_j, tau)])`` for the theta factors of Delta_a, using a's framing.

    For ``n < 0`` the listed factors are the ones that get inverted
    (``j = n, ..., -1``).
    """
    a = as_vec(a)
    fr = _framing(a)
    x = tuple(complex(c) for c in x)
    a3 = dot(fr.alpha3, x)
    if abs(a3) <= 1e-12 * _scale(x):
        raise DegenerateModuliError("alpha3(x) vanishes", a=a)
    tau = dot(fr.alpha2, x) / a3
    n = delta_count(a, ghat)
    a1 = dot(fr.alpha1, x)
    js = range(n) if n >= 0 else range(n, 0)
    return n, [((complex(w) + j * a1) / a3, tau) for j in js]


def delta_log(a, ghat: GroupElement, w, x, cfg: EvalConfig | None = None):
    """``(log Delta_a(ghat; w, x), relative error bound)``."""
    cfg = _cfg(cfg)
    n, args = delta_args(a, ghat, w, x)
    if n == 0:
        return 0j, 0.0
    if args[0][1].imag <= 0:
        raise DomainError("x is outside the chart of a", a=as_vec(a), tau=args[0][1])
    sign = 1 if n > 0 else -1
    total, err = 0j, 0.0
    for z, tau in args:
        ev = theta0_eval(z, tau, cfg)
        if sign < 0 and ev.zero_hit:
            raise ZeroHitError("inverted theta factor vanishes", a=as_vec(a), z=z, tau=tau)
        total += sign * cmath.log(ev.value)
        err += ev.err
    return total, err


def delta_eval(a, ghat, w, x, cfg=None) -> Evaluation:
    s, err = delta_log(a, ghat, w, x, cfg)
    return Evaluation(_exp(s), err)


def delta(a, ghat: GroupElement, w, x, cfg: EvalConfig | None = None) -> complex:
    """Delta_a(ghat; w, x) = prod_{j=0}^{n-1} theta0((w + j alpha1(x)) / alpha3(x), alpha2(x) / alpha3(x))

    with ``n = mu(g^{-1} a)``; for ``n < 0`` the product is
    ``prod_{j=n}^{-1} theta0(...)^{-1}``.
    """
    return delta_eval(a, ghat, w, x, cfg).value
