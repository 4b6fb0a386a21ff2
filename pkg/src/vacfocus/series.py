"""Exact arithmetic in Q(sqrt 3) and truncated power series over it.

Everything here is exact: coefficients are pairs of ``Fraction`` objects
representing ``p + q*sqrt(3)``.  Series are plain tuples of such numbers,
index ``k`` holding the coefficient of ``x**k``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Union

_SQRT3 = math.sqrt(3.0)

Rational = Union[int, Fraction]


class QSqrt3:
    """A number ``p + q*sqrt(3)`` with rational ``p`` and ``q``."""

    __slots__ = ("p", "q")

    def __init__(self, p: Rational = 0, q: Rational = 0):
        self.p = Fraction(p)
        self.q = Fraction(q)

    @classmethod
    def coerce(cls, value) -> "QSqrt3":
        if isinstance(value, QSqrt3):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"cannot represent {value!r} exactly in Q(sqrt 3)")

    def __add__(self, other):
        other = QSqrt3.coerce(other)
        return QSqrt3(self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt3(-self.p, -self.q)

    def __sub__(self, other):
        return self + (-QSqrt3.coerce(other))

    def __rsub__(self, other):
        return QSqrt3.coerce(other) - self

    def __mul__(self, other):
        other = QSqrt3.coerce(other)
        return QSqrt3(self.p * other.p + 3 * self.q * other.q,
                      self.p * other.q + self.q * other.p)

    __rmul__ = __mul__

    def inverse(self) -> "QSqrt3":
        norm = self.p * self.p - 3 * self.q * self.q
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 3)")
        return QSqrt3(self.p / norm, -self.q / norm)

    def __truediv__(self, other):
        return self * QSqrt3.coerce(other).inverse()

    def __rtruediv__(self, other):
        return QSqrt3.coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            other = QSqrt3.coerce(other)
        except TypeError:
            return NotImplemented
        return self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __bool__(self):
        return bool(self.p) or bool(self.q)

    def __float__(self):
        return float(self.p) + float(self.q) * _SQRT3

    def __repr__(self):
        if not self.q:
            return f"QSqrt3({self.p})"
        return f"QSqrt3({self.p}, {self.q})"

    def __str__(self):
        if not self.q:
            return str(self.p)
        if not self.p:
            return f"{self.q}*sqrt(3)"
        return f"{self.p} + {self.q}*sqrt(3)"


ZERO = QSqrt3(0)
ONE = QSqrt3(1)
SQRT3 = QSqrt3(0, 1)

Series = tuple  # tuple[QSqrt3, ...]


def series(coeffs: Sequence, order: int) -> Series:
    """Pad or truncate ``coeffs`` to a series with terms ``0..order``."""
    out = [QSqrt3.coerce(c) for c in coeffs[: order + 1]]
    out.extend([ZERO] * (order + 1 - len(out)))
    return tuple(out)


def add(a: Series, b: Series) -> Series:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Series, b: Series) -> Series:
    return tuple(x - y for x, y in zip(a, b))


def scale(a: Series, c) -> Series:
    c = QSqrt3.coerce(c)
    return tuple(c * x for x in a)


def mul(a: Series, b: Series) -> Series:
    n = min(len(a), len(b))
    out = []
    for k in range(n):
        acc = ZERO
        for i in range(k + 1):
            if a[i] and b[k - i]:
                acc = acc + a[i] * b[k - i]
        out.append(acc)
    return tuple(out)


def inverse(a: Series) -> Series:
    """Multiplicative inverse; requires a nonzero constant term."""
    n = len(a)
    inv0 = a[0].inverse()
    out = [inv0]
    for k in range(1, n):
        acc = ZERO
        for i in range(1, k + 1):
            if a[i]:
                acc = acc + a[i] * out[k - i]
        out.append(-acc * inv0)
    return tuple(out)


def div(a: Series, b: Series) -> Series:
    return mul(a, inverse(b))


def power(a: Series, m: int) -> Series:
    if m < 0:
        return power(inverse(a), -m)
    result = series([1], len(a) - 1)
    base = a
    while m:
        if m & 1:
            result = mul(result, base)
        base = mul(base, base)
        m >>= 1
    return result


def compose(outer: Series, inner: Series) -> Series:
    """``outer(inner(x))`` for ``inner`` with zero constant term (Horner)."""
    if inner[0]:
        raise ValueError("inner series must have zero constant term")
    n = min(len(outer), len(inner))
    inner = inner[:n]
    result = series([outer[n - 1]], n - 1)
    for k in range(n - 2, -1, -1):
        result = mul(result, inner)
        result = (result[0] + outer[k],) + result[1:]
    return result


def shift_down(a: Series, m: int) -> Series:
    """Divide by ``x**m``; the first ``m`` coefficients must vanish."""
    if any(a[:m]):
        raise ValueError(f"series is not divisible by x**{m}")
    return a[m:]


def sin_series(order: int) -> Series:
    out = []
    for k in range(order + 1):
        out.append(Fraction((-1) ** (k // 2), math.factorial(k)) if k % 2 else 0)
    return series(out, order)


def cos_series(order: int) -> Series:
    out = []
    for k in range(order + 1):
        out.append(0 if k % 2 else Fraction((-1) ** (k // 2), math.factorial(k)))
    return series(out, order)


def to_float(a: Series) -> list[float]:
    return [float(c) for c in a]


def evaluate(a: Series, x):
    """Evaluate the truncated series in floating point (works on arrays)."""
    coeffs = to_float(a)
    acc = 0.0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc
