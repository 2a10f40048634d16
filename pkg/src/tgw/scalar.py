"""Exact Gaussian rationals.

Real values are kept as plain ``int`` / ``Fraction`` objects; only values with a
nonzero imaginary part are wrapped in :class:`GaussianRational`.  Every
arithmetic result passes through :func:`normalize`, so two equal scalars always
compare (and hash) equal regardless of how they were produced.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["GaussianRational", "I", "normalize", "as_scalar", "conj", "scalar_str", "parse_rational"]


def _frac(x) -> Fraction | int:
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return _frac(Fraction(x.numerator, x.denominator))
    raise TypeError(f"not an exact rational: {x!r}")


def normalize(x):
    """Return the canonical representative of an exact scalar."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return _frac(x.re)
        return x
    return _frac(x)


class GaussianRational:
    """``re + im*i`` with exact rational parts and ``im != 0``."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @staticmethod
    def _parts(x):
        if isinstance(x, GaussianRational):
            return x.re, x.im
        if isinstance(x, (int, Fraction)):
            return x, 0
        if isinstance(x, Rational):
            return Fraction(x.numerator, x.denominator), 0
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return normalize(GaussianRational(self.re + p[0], self.im + p[1]))

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return normalize(GaussianRational(self.re - p[0], self.im - p[1]))

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return normalize(GaussianRational(p[0] - self.re, p[1] - self.im))

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = p
        return normalize(GaussianRational(a * c - b * d, a * d + b * c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by zero scalar")
        a, b = self.re, self.im
        return normalize(GaussianRational(Fraction(a * c + b * d, 1) / n, Fraction(b * c - a * d, 1) / n))

    def __rtruediv__(self, other):
        if self._parts(other) is None:
            return NotImplemented
        return normalize(other * _ginv(self))

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return inverse(self) ** (-k)
        out = 1
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return scalar_str(self)


I = GaussianRational(0, 1)


def inverse(x):
    x = normalize(x)
    if isinstance(x, GaussianRational):
        return _ginv(x)
    if x == 0:
        raise ZeroDivisionError("division by zero scalar")
    return _frac(Fraction(1) / x)


def _ginv(x: GaussianRational):
    n = Fraction(x.re * x.re + x.im * x.im)
    return normalize(GaussianRational(x.re / n, -x.im / n))


def as_scalar(x):
    """Coerce ints, fractions, and Gaussian rationals to canonical form."""
    if isinstance(x, str):
        return parse_rational(x)
    return normalize(x)


def conj(x):
    x = normalize(x)
    if isinstance(x, GaussianRational):
        return GaussianRational(x.re, -x.im)
    return x


def div(a, b):
    """Exact quotient of two scalars."""
    a, b = normalize(a), normalize(b)
    if isinstance(b, GaussianRational):
        return normalize(a * _ginv(b))
    if b == 0:
        raise ZeroDivisionError("division by zero scalar")
    if isinstance(a, GaussianRational):
        return normalize(GaussianRational(Fraction(a.re) / b, Fraction(a.im) / b))
    return _frac(Fraction(a) / b)


def parse_rational(text: str):
    return _frac(Fraction(text))


def _rat_str(q) -> str:
    q = _frac(q)
    return str(q)


def scalar_str(x) -> str:
    """Render a scalar, e.g. ``3``, ``-1/2``, ``i``, ``1/2*i``, ``1+2*i``."""
    x = normalize(x)
    if not isinstance(x, GaussianRational):
        return _rat_str(x)
    if x.im == 1:
        im = "i"
    elif x.im == -1:
        im = "-i"
    else:
        im = f"{_rat_str(x.im)}*i"
    if x.re == 0:
        return im
    if im.startswith("-"):
        return f"{_rat_str(x.re)}-{im[1:]}"
    return f"{_rat_str(x.re)}+{im}"


def is_real(x) -> bool:
    return not isinstance(normalize(x), GaussianRational)
