"""Normalization constants of the integral theorems, evaluated exactly.

Everything is built from sympy expressions so that gamma functions at
half-integers stay exact; :func:`numeric` turns a result into a complex.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import sympy as sp

from ..ensembles import SpecError, WishartSpec, kappa


def _q(x) -> sp.Rational:
    if isinstance(x, Fraction):
        return sp.Rational(x.numerator, x.denominator)
    return sp.nsimplify(x) if isinstance(x, float) else sp.Rational(x)


def i_power(x) -> sp.Expr:
    """i**x on the principal branch, exp(i pi x / 2)."""
    return sp.exp(sp.I * sp.pi * _q(x) / 2)


@lru_cache(maxsize=None)
def vol_U(beta, n: int) -> sp.Expr:
    """Volume of the rotation group U^(beta)(n)."""
    if n < 0:
        raise SpecError("group dimension must be non-negative")
    b = _q(beta)
    out = sp.Integer(1)
    for j in range(1, n + 1):
        out *= 2 * sp.pi ** (b * j / 2) / sp.gamma(b * j / 2)
    return sp.simplify(out)


@lru_cache(maxsize=None)
def flag_ratio_FU(beta_over, d: int) -> sp.Expr:
    """Flag-manifold to permutation-group volume ratio FU_d^(beta_over)."""
    b = _q(beta_over)
    out = sp.Rational(1, sp.factorial(d))
    for j in range(1, d + 1):
        out *= sp.pi ** (b * (j - 1) / 2) * sp.gamma(b / 2) / sp.gamma(b * j / 2)
    return sp.simplify(out)


def _check_sb(spec: WishartSpec):
    if spec.b != 0:
        raise SpecError("the constants are defined for b = 0")
    if spec.a < spec.c:
        raise SpecError(f"need a >= c, got a={spec.a}, c={spec.c}")


def constant_C(spec: WishartSpec) -> sp.Expr:
    """Prefactor of the superbosonization formula."""
    _check_sb(spec)
    beta, a, c, d = spec.beta, spec.a, spec.c, spec.d
    g1, g2, gt = spec.gamma1, spec.gamma2, spec.gamma_tilde
    k = _q(kappa(spec, "thm1"))
    out = (-2 * sp.pi * g1) ** (-a * d) * (-2 * sp.pi / g2) ** (c * d) * sp.Rational(1, 2**c)
    out *= sp.Integer(gt) ** (sp.Rational(beta * a * c, 2))
    out *= vol_U(beta, a) / vol_U(beta, a - c)
    for n in range(1, d + 1):
        e = sp.Rational(4 * (n - 1), beta)
        out *= sp.gamma(g1 * k + sp.Rational(2 * (n - d), beta)) / (i_power(e) * sp.pi ** (e / 2))
    return out


def constant_Ctilde(spec: WishartSpec) -> sp.Expr:
    """Prefactor of the generalized Hubbard-Stratonovich transformation."""
    _check_sb(spec)
    beta, a, c, d = spec.beta, spec.a, spec.c, spec.d
    g1, g2, gt = spec.gamma1, spec.gamma2, spec.gamma_tilde
    out = sp.Rational(1, 2**c) * (2 * sp.pi * g1) ** (-a * d) * (2 * sp.pi / g2) ** (c * d)
    out *= sp.Integer(gt) ** (sp.Rational(beta * a * c, 2))
    out *= vol_U(beta, a) / (vol_U(beta, a - c) * flag_ratio_FU(sp.Rational(4, beta), d))
    return out


def gamma_product(spec: WishartSpec) -> sp.Expr:
    """prod_n i^{4(n-1)/beta} G(1+2n/beta) / (G(2/beta+1) G(g1 kappa - 2(n-1)/beta))."""
    beta, d = spec.beta, spec.d
    gk = spec.gamma1 * _q(kappa(spec, "thm1"))
    out = sp.Integer(1)
    for n in range(1, d + 1):
        t = sp.Rational(2, beta)
        out *= i_power(sp.Rational(4 * (n - 1), beta)) * sp.gamma(1 + t * n)
        out /= sp.gamma(t + 1) * sp.gamma(gk - t * (n - 1))
    return out


def constant_ratio(spec: WishartSpec) -> sp.Expr:
    """The closed-form value of C~/C."""
    _check_sb(spec)
    return (-1) ** (spec.d * (spec.a - spec.c)) * gamma_product(spec)


def pure_fermionic_constant(spec: WishartSpec) -> sp.Expr:
    """Prefactor for c = 0 written directly in terms of a and d."""
    beta, a, d = spec.beta, spec.a, spec.d
    prod = sp.Integer(1)
    for n in range(1, d + 1):
        e = sp.Rational(4 * (n - 1), beta)
        prod *= i_power(e) * sp.pi ** (e / 2) / sp.gamma(a + 1 + sp.Rational(2 * (n - 1), beta))
    return (-2 * sp.pi * spec.gamma1) ** (-a * d) / prod


def ingham_siegel_constant(spec: WishartSpec) -> sp.Expr:
    """G_{a-c,c}: normalization of the ordinary Ingham-Siegel integral."""
    beta, a, c = spec.beta, spec.a, spec.c
    k = _q(kappa(spec, "ordinary_d0"))
    out = (sp.Integer(spec.gamma2) / sp.pi) ** (spec.gamma2 * c * k)
    for j in range(a - c + 1, a + 1):
        out *= 2 * sp.pi ** (sp.Rational(beta * j, 2)) / sp.gamma(sp.Rational(beta * j, 2))
    return out


def numeric(x, digits: int = 30) -> complex:
    return complex(sp.N(x, digits))


__all__ = [
    "constant_C",
    "constant_Ctilde",
    "constant_ratio",
    "flag_ratio_FU",
    "gamma_product",
    "i_power",
    "ingham_siegel_constant",
    "numeric",
    "pure_fermionic_constant",
    "vol_U",
]
