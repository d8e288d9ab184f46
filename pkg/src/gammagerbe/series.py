"""Truncated formal power series in one variable over an exact field."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable


class FormalSeries:
    """``sum c_k x^k`` known modulo ``x^order``.

    Coefficients may be any field elements (``Fraction`` for exact work).
    Instances are immutable; every operation truncates to the smaller order.
    """

    __slots__ = ("_c", "order")

    def __init__(self, coefficients: Iterable, order: int | None = None):
        c = list(coefficients)
        if order is None:
            order = len(c)
        if order < 1:
            raise ValueError("order must be >= 1")
        c = (c + [0] * order)[:order]
        self._c = tuple(c)
        self.order = order

    @property
    def coefficients(self) -> tuple:
        return self._c

    def __getitem__(self, k: int):
        return self._c[k] if 0 <= k < self.order else 0

    def __repr__(self):
        return f"FormalSeries({list(self._c)!r})"

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.order == other.order and self._c == other._c

    def __hash__(self):
        return hash((self._c, self.order))

    def _coerce(self, other) -> "FormalSeries":
        if isinstance(other, FormalSeries):
            return other
        return FormalSeries([other], self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return FormalSeries([self[k] + other[k] for k in range(n)], n)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries([-c for c in self._c], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return FormalSeries([c * other for c in self._c], self.order)
        n = min(self.order, other.order)
        out = [0] * n
        for i in range(n):
            ci = self._c[i]
            if ci == 0:
                continue
            for j in range(n - i):
                out[i + j] += ci * other._c[j]
        return FormalSeries(out, n)

    __rmul__ = __mul__

    def truncate(self, order: int) -> "FormalSeries":
        return FormalSeries(self._c[:order], min(order, self.order))

    def inverse(self) -> "FormalSeries":
        """Multiplicative inverse by Newton iteration ``b <- b (2 - a b)``."""
        if self._c[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        one = Fraction(1) if isinstance(self._c[0], (int, Fraction)) else 1
        b = FormalSeries([one / self._c[0]], 1)
        n = 1
        while n < self.order:
            n = min(2 * n, self.order)
            a = self.truncate(n)
            b = FormalSeries(b.coefficients, n)
            b = b * (2 - a * b)
        return b

    def __truediv__(self, other):
        if isinstance(other, FormalSeries):
            return self * other.inverse()
        return FormalSeries([c / other for c in self._c], self.order)

    @classmethod
    def exp(cls, c, order: int) -> "FormalSeries":
        """``exp(c x)``."""
        if isinstance(c, int):
            c = Fraction(c)
        out, p = [], Fraction(1) if isinstance(c, (int, Fraction)) else 1.0
        for k in range(order):
            out.append(p / factorial(k))
            p = p * c
        return cls(out, order)

    @classmethod
    def expm1_over_x(cls, c, order: int) -> "FormalSeries":
        """``(exp(c x) - 1) / x``; the leading coefficient is ``c``."""
        if isinstance(c, int):
            c = Fraction(c)
        out, p = [], c
        for k in range(order):
            out.append(p / factorial(k + 1))
            p = p * c
        return cls(out, order)
