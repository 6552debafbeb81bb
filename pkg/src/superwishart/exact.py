"""Exact complex rationals and coefficient-type dispatch helpers.

Grassmann coefficients are duck-typed: python complex/float/int, numpy arrays
(one value per quadrature node), :class:`GaussRat`, sympy expressions and
:class:`superwishart.jets.Jet`.  The helpers below give each type a common
vocabulary for conjugation, exponentials, reciprocals and zero tests.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Number, Rational

import numpy as np


class GaussRat:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, Rational):
            return GaussRat(other, 0)
        if isinstance(other, complex):
            raise TypeError("refusing to mix floating complex into exact arithmetic")
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def reciprocal(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("GaussRat division by zero")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.reciprocal()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.reciprocal() ** (-k)
        out, base = GaussRat(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        if self.im == 0:
            return f"GaussRat({self.re})"
        return f"GaussRat({self.re}, {self.im})"


I = GaussRat(0, 1)


def is_exact_zero(c) -> bool:
    """True only for scalar coefficients that are identically zero.

    Arrays and jets are never pruned: a zero at one node says nothing about
    the others and keeping the term costs little.
    """
    if isinstance(c, (np.ndarray,)):
        return False
    if isinstance(c, Number):
        return c == 0
    if isinstance(c, GaussRat):
        return not c
    if hasattr(c, "is_zero") and not callable(c.is_zero):
        # sympy expressions expose is_zero as a property (True/False/None)
        return c.is_zero is True
    return False


def conj(c):
    if isinstance(c, (int, float, Fraction)):
        return c
    if hasattr(c, "conjugate"):
        return c.conjugate()
    raise TypeError(f"cannot conjugate coefficient of type {type(c).__name__}")


def exp(c):
    if isinstance(c, np.ndarray):
        return np.exp(c)
    if isinstance(c, (int, float, complex, Fraction)):
        return cmath.exp(c) if isinstance(c, complex) else math.exp(c)
    if hasattr(c, "exp"):
        return c.exp()
    if _is_sympy(c):
        import sympy

        return sympy.exp(c)
    raise TypeError(f"no exponential for coefficient of type {type(c).__name__}")


def recip(c):
    if isinstance(c, np.ndarray):
        return 1.0 / c
    if isinstance(c, GaussRat):
        return c.reciprocal()
    if isinstance(c, (Fraction, int)) and not isinstance(c, bool):
        return Fraction(1, 1) / c
    if isinstance(c, (float, complex)):
        return 1.0 / c
    if hasattr(c, "reciprocal"):
        return c.reciprocal()
    if _is_sympy(c):
        return 1 / c
    raise TypeError(f"no reciprocal for coefficient of type {type(c).__name__}")


def power(c, p):
    """Principal power of a body value; exact types only accept integer p."""
    if isinstance(c, np.ndarray):
        if np.iscomplexobj(c):
            return np.power(c, p)
        if np.all(c > 0):
            return np.power(c, p)
        return np.power(c.astype(complex), p)
    if isinstance(c, (GaussRat, Fraction, int)) and float(p).is_integer():
        return c ** int(p) if isinstance(c, GaussRat) else Fraction(c) ** int(p)
    if isinstance(c, (float, complex, int, Fraction)):
        if isinstance(c, complex) or c < 0:
            return complex(c) ** p
        return float(c) ** p
    if _is_sympy(c):
        return c ** p
    raise TypeError(f"no power for coefficient of type {type(c).__name__}")


def rational(num: int, den: int, like):
    """num/den in a type that mixes cleanly with the coefficient ``like``."""
    if isinstance(like, (GaussRat, Fraction, int)) and not isinstance(like, bool):
        return Fraction(num, den)
    if _is_sympy(like):
        import sympy

        return sympy.Rational(num, den)
    return num / den


def magnitude(c) -> float:
    """Largest absolute value carried by a coefficient."""
    if isinstance(c, np.ndarray):
        return float(np.max(np.abs(c))) if c.size else 0.0
    if hasattr(c, "magnitude"):
        return c.magnitude()
    return abs(complex(c))


def _is_sympy(c) -> bool:
    return type(c).__module__.startswith("sympy")
