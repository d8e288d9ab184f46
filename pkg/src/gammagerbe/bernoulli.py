"""Multiple Bernoulli polynomials and the hermitian weights built from them.

Two normalisations appear here.

* ``multiple_bernoulli(degree, z, periods)`` is the coefficient in
  ``x^r e^{z x} / prod_i (e^{w_i x} - 1) = sum_k B(k; z | w) x^k / k!`` with
  ``r = len(periods)``.
* ``bernoulli_kn(k, n, z, periods)`` takes ``n - 1`` periods and appends the
  unit period: it is ``multiple_bernoulli(k, z, periods + [1])``.

The hermitian weights ``h_n`` use ``n - 1`` imaginary parts as the periods
and degree ``n``; ``convention="unit-period"`` switches them to the
``bernoulli_kn(n - 1, n, ...)`` normalisation for comparison.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence

from .family import delta_args, gamma_ab_factors
from .lattice import GroupElement, as_vec, neg
from .series import FormalSeries

CONVENTIONS = ("degree-n", "unit-period")


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """``B_0 .. B_n`` with ``B_1 = -1/2`` (generating function ``x / (e^x - 1)``)."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(math.comb(m + 1, k) * b[k] for k in range(m)) / (m + 1))
    return tuple(b)


def _is_exact(*vals) -> bool:
    return all(isinstance(v, Rational) for v in vals)


def _check_periods(periods: Sequence) -> None:
    for t in periods:
        if t == 0:
            raise ValueError("periods must be nonzero")


def multiple_bernoulli_coefficients(degree: int, periods: Sequence) -> list:
    """Coefficients (constant term first) of ``B(degree; z | periods)`` as a polynomial in ``z``.

    Computed exactly with formal series when the periods are rational.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    _check_periods(periods)
    order = degree + 4
    if _is_exact(*periods):
        den = FormalSeries([Fraction(1)], order)
        for t in periods:
            den = den * FormalSeries.expm1_over_x(Fraction(t), order)
        d = den.inverse()
        return [Fraction(math.factorial(degree), math.factorial(i)) * d[degree - i] for i in range(degree + 1)]
    c = _convolution_coefficients(degree, [float(t) for t in periods])
    return [math.comb(degree, i) * c[degree - i] for i in range(degree + 1)]


def _convolution_coefficients(degree: int, periods: list[float]) -> list[float]:
    # x / (e^{w x} - 1) = sum_k B_k w^(k-1) x^k / k!
    bn = [float(b) for b in bernoulli_numbers(degree)]
    r = len(periods)
    out = []
    for k in range(degree + 1):
        tot = 0.0
        for ks in itertools.product(range(k + 1), repeat=r):
            if sum(ks) != k:
                continue
            term = 1.0
            for ki, w in zip(ks, periods):
                term *= bn[ki] * w ** (ki - 1) / math.factorial(ki)
            tot += term
        out.append(math.factorial(k) * tot)
    return out


def multiple_bernoulli(degree: int, z, periods: Sequence):
    coeffs = multiple_bernoulli_coefficients(degree, periods)
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class BernoulliValue:
    value: object
    k: int
    n: int
    z: object
    periods: tuple
    coefficients: tuple

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coefficients) if c != 0]
        return nz[-1] if nz else -1


def bernoulli_kn(k: int, n: int, z, periods: Sequence = ()) -> BernoulliValue:
    """``k!`` times the ``x^k`` coefficient of
    ``x^n e^{z x} / ((e^{t_1 x} - 1) ... (e^{t_{n-1} x} - 1) (e^x - 1))``."""
    if n < 1 or k < 0:
        raise ValueError("need k >= 0 and n >= 1")
    periods = tuple(periods)
    if len(periods) != n - 1:
        raise ValueError(f"B_(k,{n}) takes {n - 1} periods, got {len(periods)}")
    full = periods + (Fraction(1) if _is_exact(*periods) else 1.0,)
    coeffs = multiple_bernoulli_coefficients(k, full)
    if _is_exact(z, *periods):
        z = Fraction(z)
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return BernoulliValue(acc, k, n, z, periods, tuple(coeffs))


# --------------------------------------------------------------------------
# hermitian weights


def log_h_metric(n: int, z: complex, taus: Sequence[complex], convention: str = "degree-n") -> float:
    if n not in (2, 3):
        raise ValueError("only h_2 and h_3 are defined")
    if len(taus) != n - 1:
        raise ValueError(f"h_{n} takes {n - 1} periods")
    zeta = complex(z).imag
    ts = [complex(t).imag for t in taus]
    if any(t == 0.0 for t in ts):
        raise ValueError("h_n needs non-real periods")
    if convention == "degree-n":
        b = multiple_bernoulli(n, zeta, ts)
    elif convention == "unit-period":
        b = multiple_bernoulli(n - 1, zeta, ts + [1.0])
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return -(4.0 * math.pi / math.factorial(n)) * b


def h_metric(n: int, z: complex, taus: Sequence[complex], convention: str = "degree-n") -> float:
    """``h_n(z, tau_1..tau_{n-1}) = exp(-(4 pi / n!) B(zeta | t_1..t_{n-1}))``,
    ``zeta = Im z``, ``t_j = Im tau_j``; depends on imaginary parts only."""
    return math.exp(log_h_metric(n, z, taus, convention))


def log_h_ab(a, b, w, x, convention: str = "degree-n", alpha=None, beta=None) -> float:
    a, b = as_vec(a), as_vec(b)
    if a == b or a == neg(b):
        return 0.0
    args, _ = gamma_ab_factors(a, b, complex(w), x, alpha, beta)
    return sum(log_h_metric(3, z, (t, s), convention) for z, t, s in args)


def h_ab(a, b, w, x, convention: str = "degree-n", alpha=None, beta=None) -> float:
    """Product of ``h_3`` over the same factor arguments as ``gamma_ab``."""
    return math.exp(log_h_ab(a, b, w, x, convention, alpha, beta))


def log_h_a(a, ghat: GroupElement, w, x, convention: str = "degree-n") -> float:
    n, args = delta_args(a, ghat, w, x)
    sign = 1 if n >= 0 else -1
    return sign * sum(log_h_metric(2, z, (t,), convention) for z, t in args)


def h_a(a, ghat: GroupElement, w, x, convention: str = "degree-n") -> float:
    """Product of ``h_2`` mirroring ``delta`` factor for factor (inverted for negative counts)."""
    return math.exp(log_h_a(a, ghat, w, x, convention))
