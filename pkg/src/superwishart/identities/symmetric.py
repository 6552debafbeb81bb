"""Symmetric polynomials and the Sekiguchi-type differential operator.

The operator on functions of ``d`` real eigenvalues ``r`` is

    D = Delta(r)^{-1} det[ r_n^{d-m} (d/dr_n + (d-m) (bt/2) / r_n) ]_{n,m}

with ``bt`` the Dyson index of the ordinary matrices (``4/beta``).  The rows
act on different variables and commute, so the determinant is expanded as a
signed sum over permutations.  Acting on a symmetric polynomial the numerator
is antisymmetric, hence exactly divisible by the Vandermonde determinant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import sympy as sp


class OperatorError(ArithmeticError):
    """The numerator was not divisible by the Vandermonde determinant."""


def symbols(d: int):
    return sp.symbols(f"r1:{d + 1}", real=True) if d else ()


def vandermonde(rs):
    out = sp.Integer(1)
    for n in range(len(rs)):
        for m in range(n + 1, len(rs)):
            out *= rs[n] - rs[m]
    return out


def partitions(degree: int, parts: int):
    """Partitions of ``degree`` into at most ``parts`` parts, padded, descending."""

    def rec(n, k, cap):
        if k == 0:
            if n == 0:
                yield ()
            return
        for first in range(min(n, cap), -1, -1):
            for rest in rec(n - first, k - 1, first):
                yield (first,) + rest

    return list(rec(degree, parts, degree))


def monomial_symmetric(lam, rs):
    """m_lambda: sum over distinct permutations of r^lambda."""
    seen = set()
    out = sp.Integer(0)
    for perm in itertools.permutations(lam):
        if perm in seen:
            continue
        seen.add(perm)
        term = sp.Integer(1)
        for r, e in zip(rs, perm):
            term *= r**e
        out += term
    return out


@dataclass(frozen=True)
class SymmetricPolynomial:
    """sum_lambda coef_lambda m_lambda(r_1..r_d)."""

    d: int
    coeffs: tuple  # ((partition, coefficient), ...)

    @classmethod
    def monomial(cls, lam, d: int, coef=1):
        lam = tuple(sorted(lam, reverse=True)) + (0,) * (d - len(lam))
        if len(lam) != d:
            raise ValueError(f"partition {lam} has more than {d} parts")
        return cls(d, ((lam, sp.nsimplify(coef)),))

    def to_expr(self, rs=None):
        rs = symbols(self.d) if rs is None else rs
        return sp.expand(sum((c * monomial_symmetric(lam, rs) for lam, c in self.coeffs), sp.Integer(0)))

    @property
    def degree(self):
        return max((sum(lam) for lam, _ in self.coeffs), default=0)


def _apply_row(expr, r, power, shift, half_bt):
    """r^power (d/dr + shift * half_bt / r) applied to expr."""
    out = r**power * sp.diff(expr, r)
    if shift:
        out += shift * half_bt * r ** (power - 1) * expr
    return out


def sekiguchi_apply(d: int, beta_over, expr, rs=None):
    """One application of D^(beta_over) to a sympy expression in ``rs``."""
    rs = symbols(d) if rs is None else rs
    if d == 0:
        return expr
    half_bt = sp.Rational(beta_over) / 2 if not isinstance(beta_over, sp.Basic) else beta_over / 2
    num = sp.Integer(0)
    for perm in itertools.permutations(range(d)):
        sign = _perm_sign(perm)
        term = expr
        for n in range(d):
            m = perm[n] + 1  # column index 1..d
            term = _apply_row(term, rs[n], d - m, d - m, half_bt)
        num += sign * term
    num = sp.expand(num)
    if d == 1:
        return num
    q, rem = sp.div(sp.Poly(num, *rs), sp.Poly(vandermonde(rs), *rs))
    if not rem.is_zero:
        raise OperatorError("numerator of the operator is not divisible by the Vandermonde determinant")
    return q.as_expr()


def _perm_sign(perm):
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def sekiguchi_power(d: int, beta_over, expr, power: int, sign: int = 1, rs=None):
    """(sign * D)^power expr."""
    rs = symbols(d) if rs is None else rs
    for _ in range(power):
        expr = sp.expand(sign * sekiguchi_apply(d, beta_over, expr, rs))
    return expr


@lru_cache(maxsize=None)
def operator_weight(d: int, beta_over, power: int, lam: tuple, sign: int = 1):
    """[(sign D)^power m_lambda](0) as an exact sympy number."""
    rs = symbols(d)
    expr = sekiguchi_power(d, sp.Rational(beta_over), monomial_symmetric(lam, rs), power, sign, rs)
    return sp.nsimplify(expr.subs({r: 0 for r in rs}))


def sekiguchi_numeric_on_exponential(d: int, beta_over, r, weights, gamma: float):
    """D applied to exp(i gamma sum_n r_n A_n) with A the given row weights.

    ``weights`` has shape (d, nodes); the result (per node) is the factor
    multiplying the exponential.  Only d <= 2 is needed.
    """
    import numpy as np

    A = np.asarray(weights, dtype=float)
    ig = 1j * gamma
    if d == 1:
        return ig * A[0]
    if d == 2:
        r1, r2 = r
        return (ig * A[0]) * (ig * A[1]) + (beta_over / 2) * (ig * A[1] - ig * A[0]) / (r1 - r2)
    raise ValueError("numeric operator only implemented for d <= 2")


__all__ = [
    "OperatorError",
    "SymmetricPolynomial",
    "monomial_symmetric",
    "operator_weight",
    "partitions",
    "sekiguchi_apply",
    "sekiguchi_numeric_on_exponential",
    "sekiguchi_power",
    "symbols",
    "vandermonde",
]
