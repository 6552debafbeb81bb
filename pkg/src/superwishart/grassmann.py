"""Finite complex Grassmann algebra with Berezin integration.

Elements are sparse maps from generator subsets (python int bitsets) to
coefficients.  Generators are paired as ``(2k, 2k+1) = (zeta_k, zeta_k^*)``;
that pairing is what :func:`ga_conjugate` uses.

Conventions (pinned by the calibration tests):

* conjugation keeps the factor order, ``(t1 t2)^* = t1^* t2^*``, is
  antilinear and sends ``zeta -> zeta^*``, ``zeta^* -> -zeta``;
* ``berezin(x, g)`` moves ``g`` to the far right, strips it and multiplies by
  ``NU = (2 pi)^(-1/2)``.  An iterated integral ``int f d1 d2`` integrates
  ``d1`` first.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache

from . import exact

NU = (2.0 * math.pi) ** -0.5
MAX_GENERATORS = 64


class GrassmannError(ValueError):
    """Raised for dimension, parity or pairing misuse."""


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


@lru_cache(maxsize=1 << 16)
def _merge_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenated monomial ``a`` then ``b``."""
    s = 0
    while b:
        low = b & -b
        s += (a & ~((low << 1) - 1)).bit_count()
        b ^= low
    return -1 if s & 1 else 1


def _conj_key(key: int) -> tuple[int, int]:
    """Mapped bitset and sign for conjugating the monomial ``key``."""
    odd = key & 0xAAAAAAAAAAAAAAAA
    even = key & 0x5555555555555555
    mapped = (even << 1) | (odd >> 1)
    full_pairs = (even & (odd >> 1)).bit_count()
    flips = odd.bit_count() + full_pairs
    return mapped, (-1 if flips & 1 else 1)


class GrassmannElement:
    """Immutable element of the Grassmann algebra on ``n`` generators."""

    __slots__ = ("n", "terms")
    __array_ufunc__ = None  # numpy must defer to __rmul__ and friends

    def __init__(self, n: int, terms: dict | None = None):
        if not 0 <= n <= MAX_GENERATORS:
            raise GrassmannError(f"generator count {n} outside [0, {MAX_GENERATORS}]")
        self.n = n
        if not terms:
            self.terms = {}
            return
        limit = 1 << n
        clean = {}
        for key in sorted(terms):
            if key < 0 or key >= limit:
                raise GrassmannError(f"term {key:b} uses a generator >= {n}")
            c = terms[key]
            if not exact.is_exact_zero(c):
                clean[key] = c
        self.terms = clean

    # construction helpers
    @classmethod
    def _raw(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def scalar(cls, n, c):
        return cls(n, {0: c})

    @classmethod
    def one(cls, n):
        return cls(n, {0: 1})

    @classmethod
    def generator(cls, n, g, c=1):
        if not 0 <= g < n:
            raise GrassmannError(f"generator {g} out of range for n={n}")
        return cls(n, {1 << g: c})

    # arithmetic
    def _same(self, other):
        if other.n != self.n:
            raise GrassmannError(f"generator counts differ: {self.n} vs {other.n}")

    def __add__(self, other):
        if isinstance(other, GrassmannElement):
            self._same(other)
            out = dict(self.terms)
            for k, v in other.terms.items():
                out[k] = out[k] + v if k in out else v
            return GrassmannElement(self.n, out)
        return self + GrassmannElement.scalar(self.n, other)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return GrassmannElement._raw(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GrassmannElement):
            return ga_mul(self, other)
        return GrassmannElement(self.n, {k: v * other for k, v in self.terms.items()})

    def __rmul__(self, other):
        # scalars commute with everything
        return GrassmannElement(self.n, {k: other * v for k, v in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, GrassmannElement):
            return self * ga_inv_even(other)
        return GrassmannElement(self.n, {k: v / other for k, v in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise GrassmannError("only non-negative integer powers are supported")
        out = GrassmannElement.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, GrassmannElement):
            other = GrassmannElement.scalar(self.n, other)
        if self.n != other.n or self.terms.keys() != other.terms.keys():
            return False
        return all(_coeff_equal(v, other.terms[k]) for k, v in self.terms.items())

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return f"GrassmannElement(n={self.n}, 0)"
        parts = []
        for key, c in self.terms.items():
            gens = "".join(f"g{i}" for i in range(self.n) if key >> i & 1) or "1"
            parts.append(f"({c})*{gens}")
        return f"GrassmannElement(n={self.n}, " + " + ".join(parts) + ")"

    def conjugate(self):
        return ga_conjugate(self)

    def max_abs(self) -> float:
        return max((exact.magnitude(v) for v in self.terms.values()), default=0.0)


def _coeff_equal(a, b):
    try:
        import numpy as np

        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            return bool(np.all(np.asarray(a) == np.asarray(b)))
    except ImportError:  # pragma: no cover
        pass
    return a == b


def ga_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    """Exterior product with signs folded into the coefficients."""
    x._same(y)
    out: dict = {}
    for ka, va in x.terms.items():
        for kb, vb in y.terms.items():
            if ka & kb:
                continue
            p = va * vb
            if _merge_sign(ka, kb) < 0:
                p = -p
            k = ka | kb
            out[k] = out[k] + p if k in out else p
    return GrassmannElement(x.n, out)


def parity(x: GrassmannElement) -> Parity:
    kinds = {key.bit_count() & 1 for key in x.terms}
    if kinds <= {0}:
        return Parity.EVEN
    if kinds == {1}:
        return Parity.ODD
    return Parity.MIXED


def body(x: GrassmannElement):
    return x.terms.get(0, 0)


def soul(x: GrassmannElement) -> GrassmannElement:
    return GrassmannElement._raw(x.n, {k: v for k, v in x.terms.items() if k})


def ga_conjugate(x: GrassmannElement) -> GrassmannElement:
    """Antilinear conjugation under the adjacent generator pairing."""
    if x.n % 2:
        top = 1 << (x.n - 1)
        if any(k & top for k in x.terms):
            raise GrassmannError(f"generator {x.n - 1} has no conjugate partner")
    out = {}
    for key, c in x.terms.items():
        mapped, sign = _conj_key(key)
        v = exact.conj(c)
        out[mapped] = -v if sign < 0 else v
    return GrassmannElement(x.n, out)


def berezin(x: GrassmannElement, g: int, nu=NU) -> GrassmannElement:
    """Integrate over generator ``g``: keep terms containing it, strip it."""
    if not 0 <= g < x.n:
        raise GrassmannError(f"generator {g} out of range for n={x.n}")
    bit = 1 << g
    out = {}
    for key, c in x.terms.items():
        if not key & bit:
            continue
        sign = -1 if (key >> (g + 1)).bit_count() & 1 else 1
        v = c * nu
        out[key ^ bit] = -v if sign < 0 else v
    return GrassmannElement(x.n, out)


def berezin_all(x: GrassmannElement, order=None, nu=NU) -> GrassmannElement:
    """Iterated integral over ``order`` (default: every generator, ascending).

    With adjacent pairing the default order is ``d zeta_0 d zeta_0^* d zeta_1 ...``.
    """
    order = range(x.n) if order is None else order
    for g in order:
        x = berezin(x, g, nu)
    return x


def _require_even(x, what):
    if parity(x) is not Parity.EVEN:
        raise GrassmannError(f"{what} needs an even element")


def _sample_coeff(x):
    return next(iter(x.terms.values()), 0.0)


def _nilpotent_series(s: GrassmannElement, coefs) -> GrassmannElement:
    """sum_k coefs(k) s^k for a soul ``s``; stops once s^k vanishes."""
    out = GrassmannElement.scalar(s.n, coefs(0))
    term = GrassmannElement.one(s.n)
    k = 0
    while True:
        k += 1
        term = term * s
        if not term.terms:
            return out
        out = out + term * coefs(k)


def ga_exp_even(x: GrassmannElement) -> GrassmannElement:
    """exp(body) * sum_k soul^k / k!, exact because the soul is nilpotent."""
    _require_even(x, "exponential")
    if not x.terms:
        return GrassmannElement.one(x.n)
    b = body(x)
    like = _sample_coeff(x)
    series = _nilpotent_series(soul(x), lambda k: exact.rational(1, math.factorial(k), like))
    return series if 0 not in x.terms else series * exact.exp(b)


def ga_inv_even(x: GrassmannElement) -> GrassmannElement:
    """Inverse of an even element with invertible body."""
    b = body(x)
    if exact.is_exact_zero(b):
        raise GrassmannError("element with zero body is not invertible")
    inv = exact.recip(b)
    s = soul(x) * inv
    return _nilpotent_series(s, lambda k: -1 if k & 1 else 1) * inv


def ga_pow_even(x: GrassmannElement, p) -> GrassmannElement:
    """Principal power body^p * (1 + soul/body)^p of an even element."""
    _require_even(x, "power")
    b = body(x)
    if exact.is_exact_zero(b):
        raise GrassmannError("power of an element with zero body")
    s = soul(x) * exact.recip(b)
    like = b
    series = _nilpotent_series(s, lambda k: _binom(p, k, like))
    return series * exact.power(b, p)


def _binom(p, k, like):
    out = exact.rational(1, 1, like)
    for j in range(k):
        out = out * (p - j) * exact.rational(1, j + 1, like)
    return out


def max_abs_diff(x: GrassmannElement, y: GrassmannElement) -> float:
    """Largest coefficient deviation between two elements."""
    d = x - y
    return d.max_abs()
