"""Truncated multivariate power series in a handful of real variables.

A :class:`Jet` is used as a Grassmann coefficient when a quantity must be
known as a polynomial in some ordinary variables up to a fixed total degree,
for example the fermionic eigenvalues that a differential operator later acts
on at the origin.  Jet coefficients may themselves be numpy arrays.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import exact


class Jet:
    __slots__ = ("nvars", "order", "coeffs")
    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init__(self, nvars: int, order: int, coeffs=None):
        self.nvars = nvars
        self.order = order
        self.coeffs = {} if coeffs is None else coeffs

    @classmethod
    def constant(cls, nvars, order, value):
        return cls(nvars, order, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars, order, index, value=0.0):
        """The variable ``r_index`` expanded around ``value``."""
        zero = (0,) * nvars
        unit = tuple(1 if k == index else 0 for k in range(nvars))
        coeffs = {zero: value} if order >= 0 else {}
        if order >= 1:
            coeffs[unit] = 1.0
        return cls(nvars, order, coeffs)

    def _like(self, coeffs):
        return Jet(self.nvars, self.order, coeffs)

    def _check(self, other):
        if other.nvars != self.nvars or other.order != self.order:
            raise ValueError("jets with different variable count or order")

    def constant_term(self):
        return self.coeffs.get((0,) * self.nvars, 0.0)

    def coefficient(self, exponent):
        return self.coeffs.get(tuple(exponent), 0.0)

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            out = dict(self.coeffs)
            for k, v in other.coeffs.items():
                out[k] = out[k] + v if k in out else v
            return self._like(out)
        out = dict(self.coeffs)
        zero = (0,) * self.nvars
        out[zero] = out[zero] + other if zero in out else other
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            out = {}
            for ka, va in self.coeffs.items():
                da = sum(ka)
                for kb, vb in other.coeffs.items():
                    if da + sum(kb) > self.order:
                        continue
                    k = tuple(x + y for x, y in zip(ka, kb))
                    p = va * vb
                    out[k] = out[k] + p if k in out else p
            return self._like(out)
        return self._like({k: v * other for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self._like({k: v / other for k, v in self.coeffs.items()})

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def _split(self):
        zero = (0,) * self.nvars
        c0 = self.coeffs.get(zero, 0.0)
        rest = {k: v for k, v in self.coeffs.items() if k != zero}
        return c0, self._like(rest)

    def _series(self, c0_value, nil, coefs):
        """c0_value * sum_k coefs[k] * nil**k, truncated at the jet order."""
        zero = (0,) * self.nvars
        out = self._like({zero: c0_value * coefs[0]})
        term = self._like({zero: c0_value})
        for k in range(1, self.order + 1):
            term = term * nil
            out = out + term * coefs[k]
        return out

    def exp(self):
        c0, nil = self._split()
        coefs = [1.0 / math.factorial(k) for k in range(self.order + 1)]
        return self._series(exact.exp(c0), nil, coefs)

    def reciprocal(self):
        c0, nil = self._split()
        inv = exact.recip(c0)
        scaled = nil * inv
        coefs = [(-1.0) ** k for k in range(self.order + 1)]
        return self._series(1.0, scaled, coefs) * inv

    def conjugate(self):
        # the jet variables are real
        return self._like({k: exact.conj(v) for k, v in self.coeffs.items()})

    def magnitude(self):
        return max((exact.magnitude(v) for v in self.coeffs.values()), default=0.0)

    def homogeneous_part(self, degree):
        return {k: v for k, v in self.coeffs.items() if sum(k) == degree}

    def __repr__(self):
        return f"Jet(nvars={self.nvars}, order={self.order}, terms={len(self.coeffs)})"


def monomials(nvars: int, degree: int):
    """All exponent tuples of the given total degree."""
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def as_array(value, size):
    """Broadcast a scalar or array coefficient to a 1-d array of ``size``."""
    return np.broadcast_to(np.asarray(value, dtype=complex), (size,))
