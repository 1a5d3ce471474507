"""Coefficient arithmetic.

Two coefficient modes are supported.  The default mode uses Python ``complex``
numbers with an absolute pruning tolerance; the exact mode uses
:class:`GaussianRational`, a complex number with :class:`fractions.Fraction`
real and imaginary parts, so that algebraic identities can be checked without
any tolerance.
"""
from __future__ import annotations

from fractions import Fraction
import numbers as _numbers

import gmpy2

__all__ = ["GaussianRational", "to_exact", "to_fraction", "coerce", "is_zero"]


class GaussianRational:
    """Complex number with exact rational parts.

    Parts are held as ``gmpy2.mpq`` for speed and exposed as
    :class:`fractions.Fraction` through :attr:`real` and :attr:`imag`.
    """

    __slots__ = ("_re", "_im")

    def __init__(self, real=0, imag=0):
        self._re = _mpq(real)
        self._im = _mpq(imag)

    @classmethod
    def _raw(cls, re_, im) -> "GaussianRational":
        obj = object.__new__(cls)
        obj._re = re_
        obj._im = im
        return obj

    @property
    def real(self) -> Fraction:
        return Fraction(int(self._re.numerator), int(self._re.denominator))

    @property
    def imag(self) -> Fraction:
        return Fraction(int(self._im.numerator), int(self._im.denominator))

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction, _MPQ)) and not isinstance(other, bool):
            return GaussianRational._raw(_mpq(other), _ZERO)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational._raw(self._re + o._re, self._im + o._im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational._raw(self._re - o._re, self._im - o._im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, _MPQ)) and not isinstance(other, bool):
            return GaussianRational._raw(self._re * other, self._im * other)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self._re, self._im, o._re, o._im
        if not b and not d:
            return GaussianRational._raw(a * c, _ZERO)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        den = o._re * o._re + o._im * o._im
        if den == 0:
            raise ZeroDivisionError("division by exact zero")
        num = self * o.conjugate()
        return GaussianRational._raw(num._re / den, num._im / den)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussianRational._raw(-self._re, -self._im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = GaussianRational._raw(_ONE, _ZERO)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self._re, -self._im)

    def __abs__(self) -> float:
        return abs(complex(self))

    def __complex__(self) -> complex:
        return complex(float(self._re), float(self._im))

    def __bool__(self) -> bool:
        return bool(self._re) or bool(self._im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._re == other._re and self._im == other._im
        if isinstance(other, (int, Fraction, _MPQ)):
            return self._im == 0 and self._re == other
        if isinstance(other, (float, complex)):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self):
        if self._im == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __repr__(self) -> str:
        return f"GaussianRational({self.real}, {self.imag})"

    def __str__(self) -> str:
        if self._im == 0:
            return str(self.real)
        if self._re == 0:
            return f"{self.imag}i"
        sign = "+" if self._im > 0 else "-"
        return f"({self.real}{sign}{abs(self.imag)}i)"


_MPQ = type(gmpy2.mpq())
_ZERO = gmpy2.mpq(0)
_ONE = gmpy2.mpq(1)


def _mpq(x):
    if isinstance(x, _MPQ):
        return x
    f = to_fraction(x)
    return gmpy2.mpq(f.numerator, f.denominator)


def to_fraction(x) -> Fraction:
    """Convert an int, Fraction, float, Decimal or numeric string to a Fraction.

    Floats are converted exactly (binary value), strings are parsed as written.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, _MPQ):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    if isinstance(x, _numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, _numbers.Real):
        return Fraction(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def to_exact(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, complex) or (isinstance(x, _numbers.Complex) and not isinstance(x, _numbers.Real)):
        return GaussianRational(float(x.real), float(x.imag))
    return GaussianRational._raw(_mpq(x), _ZERO)


def coerce(x, exact: bool):
    """Lift ``x`` into the coefficient ring of the requested mode."""
    if exact:
        return to_exact(x)
    if isinstance(x, GaussianRational):
        return complex(x)
    if isinstance(x, Fraction):
        return complex(float(x))
    return complex(x)


def is_zero(x, exact: bool, tol: float) -> bool:
    if exact:
        return not x
    return abs(x) <= tol
