"""Components of the equivariant 2-cocycle and the identities they satisfy.

All three components are extracted with the exponent convention
``phi = exp(-(2 pi i / k!) P)`` (k = 3, 2, 1):

* ``phi_abc  = Gamma_ab Gamma_bc Gamma_ca``
* ``phi_ab(g) = Gamma_ab(p) Delta_a(g; p) / (Gamma_{g'a, g'b}(p^g) Delta_b(g; p))``
* ``phi_a(g, h) = Delta_a(g; p) Delta_{g'a}(h; p^g) / Delta_a(gh; p)``

where ``g' = g^{-1}`` and ``p^g = g^{-1} . (w, x) = (w + mu(g^{-1} x), g^{-1} x)``.
The same formulas applied to the hermitian weights give their coboundary.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bernoulli import log_h_a, log_h_ab
from .family import delta_log, gamma_ab_log
from .lattice import GroupElement, Vec, as_vec, neg, pull
from .special import EvalConfig, GammaGerbeError

#: Reported constant: exponent signs of (phi_abc, phi_ab, phi_a) relative to P.
SIGN_CONVENTION = (-1, -1, -1)

#: Exponents epsilon and signs s searched by the hermitian checks.
HERMITIAN_SEARCH = ((1, 1), (1, -1), (2, 1), (2, -1))


class ResampleError(GammaGerbeError):
    """Phase path too coarse for continuous unwrapping."""

    kind = "resample"


def _unit_residual(logval: complex) -> float:
    """``|exp(L) - 1|`` without cancellation for small ``L`` (``Im L`` taken mod 2 pi)."""
    r = logval.real
    i = math.remainder(logval.imag, 2 * math.pi)
    re = math.expm1(r) * math.cos(i) - 2.0 * math.sin(0.5 * i) ** 2
    return abs(complex(re, math.exp(r) * math.sin(i)))


# --------------------------------------------------------------------------
# components


def phi_abc_log(a, b, c, w, x, cfg: EvalConfig | None = None):
    total, err = 0j, 0.0
    for p, q in ((a, b), (b, c), (c, a)):
        s, e = gamma_ab_log(p, q, w, x, cfg)
        total += s
        err += e
    return total, err


def phi_abc(a, b, c, w, x, cfg: EvalConfig | None = None) -> complex:
    """Triple product ``Gamma_ab Gamma_bc Gamma_ca`` at ``(w, x)``."""
    return cmath.exp(phi_abc_log(a, b, c, w, x, cfg)[0])


def phi_ab_log(a, b, ghat: GroupElement, w, x, cfg: EvalConfig | None = None):
    a, b = as_vec(a), as_vec(b)
    wg, xg = pull(ghat, complex(w), x)
    ga, gb = ghat.pull_vector(a), ghat.pull_vector(b)
    parts = [
        (1, gamma_ab_log(a, b, w, x, cfg)),
        (1, delta_log(a, ghat, w, x, cfg)),
        (-1, gamma_ab_log(ga, gb, wg, xg, cfg)),
        (-1, delta_log(b, ghat, w, x, cfg)),
    ]
    return sum(s * v for s, (v, _) in parts), sum(e for _, (_, e) in parts)


def phi_ab(a, b, ghat: GroupElement, w, x, cfg: EvalConfig | None = None) -> complex:
    return cmath.exp(phi_ab_log(a, b, ghat, w, x, cfg)[0])


def phi_a_log(a, ghat: GroupElement, hhat: GroupElement, w, x, cfg: EvalConfig | None = None):
    a = as_vec(a)
    wg, xg = pull(ghat, complex(w), x)
    parts = [
        (1, delta_log(a, ghat, w, x, cfg)),
        (1, delta_log(ghat.pull_vector(a), hhat, wg, xg, cfg)),
        (-1, delta_log(a, ghat * hhat, w, x, cfg)),
    ]
    return sum(s * v for s, (v, _) in parts), sum(e for _, (_, e) in parts)


def phi_a(a, ghat: GroupElement, hhat: GroupElement, w, x, cfg: EvalConfig | None = None) -> complex:
    return cmath.exp(phi_a_log(a, ghat, hhat, w, x, cfg)[0])


# --------------------------------------------------------------------------
# coboundary checks


@dataclass
class CheckResult:
    residual: float
    error_bound: float

    @property
    def within_bound(self) -> bool:
        return self.residual <= self.error_bound


def check_tetrahedron(a, b, c, d, w, x, cfg: EvalConfig | None = None) -> CheckResult:
    """``|phi_bcd / phi_acd * phi_abd / phi_abc - 1|``."""
    terms = [
        (1, phi_abc_log(b, c, d, w, x, cfg)),
        (-1, phi_abc_log(a, c, d, w, x, cfg)),
        (1, phi_abc_log(a, b, d, w, x, cfg)),
        (-1, phi_abc_log(a, b, c, w, x, cfg)),
    ]
    return _combine(terms)


def check_equivariant(a, b, c, ghat: GroupElement, w, x, cfg: EvalConfig | None = None) -> CheckResult:
    """Mixed component: ``phi_{g'a,g'b,g'c}(p^g) / phi_abc(p) * phi_ab phi_bc / phi_ac = 1``."""
    wg, xg = pull(ghat, complex(w), x)
    ga, gb, gc = (ghat.pull_vector(as_vec(v)) for v in (a, b, c))
    terms = [
        (1, phi_abc_log(ga, gb, gc, wg, xg, cfg)),
        (-1, phi_abc_log(a, b, c, w, x, cfg)),
        (1, phi_ab_log(a, b, ghat, w, x, cfg)),
        (1, phi_ab_log(b, c, ghat, w, x, cfg)),
        (-1, phi_ab_log(a, c, ghat, w, x, cfg)),
    ]
    return _combine(terms)


def check_group(a, ghat, hhat, jhat, w, x, cfg: EvalConfig | None = None) -> CheckResult:
    """Twisted 2-cocycle law
    ``phi_a(g,h) phi_a(gh,j) = phi_a(g,hj) phi_{g'a}(h,j)(p^g)``."""
    a = as_vec(a)
    wg, xg = pull(ghat, complex(w), x)
    terms = [
        (1, phi_a_log(a, ghat, hhat, w, x, cfg)),
        (1, phi_a_log(a, ghat * hhat, jhat, w, x, cfg)),
        (-1, phi_a_log(a, ghat, hhat * jhat, w, x, cfg)),
        (-1, phi_a_log(ghat.pull_vector(a), hhat, jhat, wg, xg, cfg)),
    ]
    return _combine(terms)


def _combine(terms) -> CheckResult:
    total = sum(s * v for s, (v, _) in terms)
    bound = sum(e for _, (_, e) in terms)
    return CheckResult(_unit_residual(total), bound)


# --------------------------------------------------------------------------
# symbolic preflight


def _g_token(a: Vec, b: Vec, label: GroupElement):
    """Token for Gamma_{a,b} at point ``label^{-1} . p``; orientation normalised."""
    if a == b or a == neg(b):
        return None, 0
    if a <= b:
        return ("G", a, b, _label(label)), 1
    return ("G", b, a, _label(label)), -1


def _d_token(a: Vec, g: GroupElement, label: GroupElement):
    if g.is_identity():
        return None, 0
    return ("D", a, _label(g), _label(label)), 1


def _label(g: GroupElement):
    return (g.g, g.mu)


class Symbolic:
    """Formal products of Gamma/Delta symbols with integer exponents.

    Points are labelled by the group element ``k`` such that the point is
    ``k^{-1} . p`` for a fixed base point ``p``.  ``Gamma_{b,a}`` is rewritten
    as ``Gamma_{a,b}^{-1}`` and trivial symbols are dropped, which are the
    only relations the cocycle identities are allowed to use.
    """

    def __init__(self):
        self.powers: Counter = Counter()

    def _add(self, tok, e):
        if tok is not None and e:
            self.powers[tok] += e
            if self.powers[tok] == 0:
                del self.powers[tok]

    def gamma(self, a, b, label, e=1):
        tok, s = _g_token(as_vec(a), as_vec(b), label)
        self._add(tok, s * e)

    def delta(self, a, g, label, e=1):
        tok, s = _d_token(as_vec(a), g, label)
        self._add(tok, s * e)

    def phi_abc(self, a, b, c, label, e=1):
        self.gamma(a, b, label, e)
        self.gamma(b, c, label, e)
        self.gamma(c, a, label, e)

    def phi_ab(self, a, b, g, label, e=1):
        # label: the base point of this evaluation is label^{-1} p
        self.gamma(a, b, label, e)
        self.delta(a, g, label, e)
        self.gamma(g.pull_vector(a), g.pull_vector(b), label * g, -e)
        self.delta(b, g, label, -e)

    def phi_a(self, a, g, h, label, e=1):
        self.delta(a, g, label, e)
        self.delta(g.pull_vector(a), h, label * g, e)
        self.delta(a, g * h, label, -e)

    def is_trivial(self) -> bool:
        return not self.powers


def symbolic_tetrahedron(a, b, c, d) -> Symbolic:
    s, e = Symbolic(), GroupElement()
    s.phi_abc(b, c, d, e)
    s.phi_abc(a, c, d, e, -1)
    s.phi_abc(a, b, d, e)
    s.phi_abc(a, b, c, e, -1)
    return s


def symbolic_equivariant(a, b, c, g: GroupElement) -> Symbolic:
    s, e = Symbolic(), GroupElement()
    s.phi_abc(g.pull_vector(a), g.pull_vector(b), g.pull_vector(c), g)
    s.phi_abc(a, b, c, e, -1)
    s.phi_ab(a, b, g, e)
    s.phi_ab(b, c, g, e)
    s.phi_ab(a, c, g, e, -1)
    return s


def symbolic_group(a, g: GroupElement, h: GroupElement, j: GroupElement) -> Symbolic:
    s, e = Symbolic(), GroupElement()
    s.phi_a(a, g, h, e)
    s.phi_a(a, g * h, j, e)
    s.phi_a(a, g, h * j, e, -1)
    s.phi_a(g.pull_vector(a), h, j, g, -1)
    return s


# --------------------------------------------------------------------------
# phase fitting


@dataclass
class PhaseFit:
    """Polynomial in ``w`` (ascending monomial coefficients) fitted to the
    unwrapped logarithm; ``residual`` is measured on held-out samples."""

    coefficients: list[complex]
    residual: float
    degree_used: int
    residuals_by_degree: list[float] = field(default_factory=list)

    def __call__(self, w: complex) -> complex:
        acc = 0j
        for c in reversed(self.coefficients):
            acc = acc * w + c
        return acc


def unwrap_logs(values: Sequence[complex]) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    if np.any(v == 0):
        raise ResampleError("cannot take the logarithm of zero")
    ang = np.angle(v)
    steps = np.abs(np.remainder(np.diff(ang) + np.pi, 2 * np.pi) - np.pi)
    if np.any(steps >= np.pi / 2):
        k = int(np.argmax(steps))
        raise ResampleError("phase step too large for unwrapping", index=k, step=float(steps[k]))
    return np.log(np.abs(v)) + 1j * np.unwrap(ang)


def trace_path(
    f: Callable[[complex], complex], w0: complex, w1: complex, n: int = 24, max_halvings: int = 8
) -> list[tuple[complex, complex]]:
    """Sample ``f`` on the segment ``w0 -> w1``, halving steps until every
    phase increment is below ``pi / 2``."""
    ts = list(np.linspace(0.0, 1.0, n))
    vals = {t: f(w0 + t * (w1 - w0)) for t in ts}
    for _ in range(max_halvings):
        new = []
        for t0, t1 in zip(ts, ts[1:]):
            d = abs(cmath.phase(vals[t1] / vals[t0]))
            if d >= np.pi / 2:
                new.append(0.5 * (t0 + t1))
        if not new:
            break
        for t in new:
            vals[t] = f(w0 + t * (w1 - w0))
        ts = sorted(vals)
    return [(w0 + t * (w1 - w0), vals[t]) for t in sorted(vals)]


def _to_monomial(c_t: np.ndarray, center: complex, scale: float) -> list[complex]:
    # sum_k c_k ((w - center) / scale)^k  ->  ascending coefficients in w
    out = np.zeros(len(c_t), dtype=complex)
    for k, ck in enumerate(c_t):
        for i in range(k + 1):
            out[i] += ck * math.comb(k, i) * (-center) ** (k - i) / scale**k
    return list(out)


def fit_phase(values: Sequence[tuple[complex, complex]], max_degree: int = 3, tol: float = 1e-6) -> PhaseFit:
    """Least-squares polynomial fit of the continuous logarithm along a path.

    Even-indexed samples are fitted, odd-indexed ones are held out; the
    smallest degree whose held-out residual is below ``tol`` is used.  The
    constant term is only defined modulo ``2 pi i``.
    """
    if len(values) < max_degree + 3:
        raise ResampleError("need at least max_degree + 3 samples", samples=len(values))
    ws = np.array([complex(w) for w, _ in values])
    logs = unwrap_logs([v for _, v in values])
    center = ws.mean()
    scale = float(np.abs(ws - center).max()) or 1.0
    t = (ws - center) / scale
    fit_idx, hold_idx = np.arange(0, len(ws), 2), np.arange(1, len(ws), 2)
    if len(hold_idx) == 0:
        hold_idx = fit_idx
    by_degree, best = [], None
    for d in range(max_degree + 1):
        nfit = min(d + 1, len(fit_idx))
        vand = np.vander(t[fit_idx], nfit, increasing=True)
        c, *_ = np.linalg.lstsq(vand, logs[fit_idx], rcond=None)
        c = np.concatenate([c, np.zeros(d + 1 - nfit)])
        pred = np.vander(t[hold_idx], d + 1, increasing=True) @ c
        res = float(np.abs(pred - logs[hold_idx]).max())
        by_degree.append(res)
        if best is None and res < tol:
            best = (d, c, res)
    if best is None:
        d = max_degree
        best = (d, c, by_degree[-1])
    d, c, res = best
    coeffs = _to_monomial(c, complex(center), scale)
    return PhaseFit(coeffs, res, d, by_degree)


# --------------------------------------------------------------------------
# hermitian structure


@dataclass
class HermitianSample:
    """``log`` of the hermitian coboundary and ``log |phi|`` at one sample."""

    log_h: float
    log_abs_phi: float

    def residual(self, eps: int, sign: int) -> float:
        return abs(math.expm1(sign * self.log_h - eps * self.log_abs_phi))


def hermitian_triple(a, b, c, w, x, cfg=None, convention: str = "degree-n") -> HermitianSample:
    log_h = sum(log_h_ab(p, q, w, x, convention) for p, q in ((a, b), (b, c), (c, a)))
    return HermitianSample(log_h, phi_abc_log(a, b, c, w, x, cfg)[0].real)


def hermitian_equivariant(a, b, ghat: GroupElement, w, x, cfg=None, convention: str = "degree-n") -> HermitianSample:
    a, b = as_vec(a), as_vec(b)
    wg, xg = pull(ghat, complex(w), x)
    log_h = (
        log_h_ab(a, b, w, x, convention)
        + log_h_a(a, ghat, w, x, convention)
        - log_h_ab(ghat.pull_vector(a), ghat.pull_vector(b), wg, xg, convention)
        - log_h_a(b, ghat, w, x, convention)
    )
    return HermitianSample(log_h, phi_ab_log(a, b, ghat, w, x, cfg)[0].real)


def best_convention(samples: Sequence[HermitianSample]) -> tuple[float, tuple[int, int]]:
    """The single ``(eps, s)`` minimising the worst residual of
    ``(coboundary of h)^s = |phi|^eps`` over all samples."""
    scored = []
    for eps, sign in HERMITIAN_SEARCH:
        worst = max((smp.residual(eps, sign) for smp in samples), default=0.0)
        scored.append((worst, (eps, sign)))
    return min(scored)


def check_hermitian(a, b, c, w, x, cfg=None, convention: str = "degree-n") -> tuple[float, tuple[int, int]]:
    return best_convention([hermitian_triple(a, b, c, w, x, cfg, convention)])
