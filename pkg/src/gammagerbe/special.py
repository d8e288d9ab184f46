"""theta_0, the ordinary elliptic gamma function, and the chart predicate."""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from . import _kernels
from .lattice import cross, dot, framing

EPS = 2.220446049250313e-16


def _default_tol() -> float:
    return float(os.environ.get("GGL_DEFAULT_TOL", "1e-14"))


@dataclass(frozen=True)
class EvalConfig:
    """Truncation policy for the infinite products.

    ``tol`` is the term-size cutoff, ``max_terms`` caps the number of
    factors per product and ``pole_eps`` is the distance from zero at which
    a factor counts as a pole (denominator) or zero (numerator) hit.
    """

    tol: float = 0.0
    max_terms: int = 2_000_000
    pole_eps: float = 1e-10

    def __post_init__(self):
        if self.tol == 0.0:
            object.__setattr__(self, "tol", _default_tol())
        if not 0.0 < self.tol < 1.0:
            raise ValueError(f"tol must lie in (0, 1), got {self.tol}")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.pole_eps <= 0.0:
            raise ValueError("pole_eps must be positive")


def _cfg(cfg: EvalConfig | None) -> EvalConfig:
    return cfg if cfg is not None else EvalConfig()


class GammaGerbeError(ArithmeticError):
    """Base class for evaluation failures that carry structured context."""

    kind = "error"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context

    def to_json(self) -> dict:
        return {"error": self.kind, "message": str(self), "context": _jsonable(self.context)}


class DomainError(GammaGerbeError):
    kind = "domain"


class PoleError(GammaGerbeError):
    kind = "pole"


class ZeroHitError(PoleError):
    """A theta factor vanished where the caller has to divide by it."""

    kind = "zero"


class DegenerateModuliError(DomainError):
    kind = "degenerate-moduli"


class ConvergenceError(GammaGerbeError):
    kind = "convergence"


def _jsonable(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


class Evaluation(NamedTuple):
    """A value with a bound on its relative error.

    ``zero_hit`` marks theta evaluations where a factor came within
    ``pole_eps`` of zero; the value is still returned.
    """

    value: complex
    err: float
    terms: int = 0
    zero_hit: bool = False


def _rel_err(logsum: complex, trunc: float, mag: float, nterms: int) -> float:
    # |exp(L + e) / exp(L) - 1| <= e^|e| - 1 ; rounding grows with the summed moduli.
    e = trunc + 4.0 * EPS * (mag + nterms + abs(logsum))
    return math.expm1(e) if e < 700 else math.inf


def _exp(logsum: complex) -> complex:
    if logsum.real > 700:
        raise DomainError("value overflows double precision", log_value=logsum)
    return cmath.exp(logsum)


# --------------------------------------------------------------------------


def theta0_eval(z: complex, tau: complex, cfg: EvalConfig | None = None) -> Evaluation:
    cfg = _cfg(cfg)
    z, tau = complex(z), complex(tau)
    if not tau.imag > 0:
        raise DomainError("theta0 needs Im(tau) > 0", tau=tau)
    # theta0 is 1-periodic in z; moving Re z near 0 only tames phases.
    z = complex(z.real - math.floor(z.real + 0.5), z.imag)
    s, trunc, n, minabs, mag = _kernels.theta_logsum(z, tau, cfg.tol, cfg.max_terms)
    if math.isinf(trunc):
        raise ConvergenceError("theta0 needs more than max_terms factors", terms=n)
    return Evaluation(_exp(s), _rel_err(s, trunc, mag, n), n, minabs < cfg.pole_eps)


def theta0(z: complex, tau: complex, cfg: EvalConfig | None = None) -> complex:
    """``prod_{j>=0} (1 - e^{2 pi i ((j+1) tau - z)}) (1 - e^{2 pi i (j tau + z)})``."""
    return theta0_eval(z, tau, cfg).value


def _gamma_upper(z: complex, tau: complex, sigma: complex, cfg: EvalConfig):
    z = complex(z.real - math.floor(z.real + 0.5), z.imag)
    s, trunc, n, minden, j, k, mag = _kernels.gamma_logsum(z, tau, sigma, cfg.tol, cfg.max_terms)
    if math.isinf(trunc):
        raise ConvergenceError("elliptic gamma needs more than max_terms factors", terms=n)
    if minden < cfg.pole_eps:
        raise PoleError("elliptic gamma evaluated at a pole", z=z, tau=tau, sigma=sigma, j=j, k=k)
    return s, _rel_err(s, trunc, mag, n), n


def elliptic_gamma_log(z: complex, tau: complex, sigma: complex, cfg: EvalConfig | None = None):
    """``(log value, relative error bound, terms)`` of the elliptic gamma function.

    For a period in the lower half plane the function is continued by
    ``Gamma(z, tau, sigma) = 1 / Gamma(z - sigma, tau, -sigma)`` (and the same
    rule in ``tau``), which reduces every case to the convergent product.
    """
    cfg = _cfg(cfg)
    z, tau, sigma = complex(z), complex(tau), complex(sigma)
    if tau.imag == 0.0 or sigma.imag == 0.0:
        raise DomainError("elliptic gamma needs non-real periods", tau=tau, sigma=sigma)
    sign = 1
    if tau.imag < 0:
        z, tau, sign = z - tau, -tau, -sign
    if sigma.imag < 0:
        z, sigma, sign = z - sigma, -sigma, -sign
    s, err, n = _gamma_upper(z, tau, sigma, cfg)
    return sign * s, err, n


def elliptic_gamma_eval(z, tau, sigma, cfg: EvalConfig | None = None) -> Evaluation:
    s, err, n = elliptic_gamma_log(z, tau, sigma, cfg)
    return Evaluation(_exp(s), err, n)


def elliptic_gamma(z: complex, tau: complex, sigma: complex, cfg: EvalConfig | None = None) -> complex:
    """Ordinary elliptic gamma function

    ``prod_{j,k>=0} (1 - e((j+1) tau + (k+1) sigma - z)) / (1 - e(j tau + k sigma + z))``
    with ``e(t) = exp(2 pi i t)``, continued to lower-half-plane periods.
    """
    return elliptic_gamma_eval(z, tau, sigma, cfg).value


# --------------------------------------------------------------------------


def chart_form(a: Sequence[int], x: Sequence[complex]) -> float:
    """``Im(alpha(x) * conj(beta(x)))`` for the oriented annihilator basis of ``a``.

    The basis is the ``(alpha2, alpha3)`` pair of the canonical framing, whose
    cross product is ``+a``; any other basis of the same orientation scales
    the value by a positive determinant.
    """
    fr = framing(a)
    return (dot(fr.alpha2, x) * dot(fr.alpha3, x).conjugate()).imag


def in_domain(a: Sequence[int], x: Sequence[complex]) -> bool:
    """Membership of ``x`` in the chart ``U_a^+``; boundary points are excluded."""
    return chart_form(a, x) > 0.0


def normal_vector(x: Sequence[complex]) -> tuple[float, float, float]:
    """``Im x  cross  Re x``; ``x`` lies in ``U_a^+`` iff ``<a, normal> > 0``."""
    u = [complex(c).real for c in x]
    v = [complex(c).imag for c in x]
    return cross(v, u)  # type: ignore[arg-type]


@dataclass(frozen=True)
class ModuliPoint:
    w: complex
    x: tuple[complex, complex, complex]

    def __post_init__(self):
        x = tuple(complex(c) for c in self.x)
        if len(x) != 3:
            raise ValueError("x needs three coordinates")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "w", complex(self.w))
        nv = normal_vector(x)
        if max(abs(c) for c in nv) == 0.0:
            raise DegenerateModuliError("x is a complex multiple of a real vector", x=x)

    def scaled(self, lam: complex) -> "ModuliPoint":
        return ModuliPoint(lam * self.w, tuple(lam * c for c in self.x))

