"""Matrix Bessel functions of two real eigenvalues and their eigen-operator.

phi(r, s) = int exp(i tr r U s U^dag) dmu(U) over U^(bt)(d), bt = 4/beta.
For d = 2 the trace only sees the squared modulus t = |U_11|^2 (as a real,
complex or quaternion number), which under the normalized Haar measure is
Beta(bt/2, bt/2) distributed.  Kramers doubling for bt = 4 makes the trace
twice the 2 x 2 expression, hence the factor gamma_1.

    tr r U s U^dag = gamma_1 [r1 (s1 t + s2 (1-t)) + r2 (s1 (1-t) + s2 t)].

The t-integral uses Gauss-Jacobi nodes for the Beta weight; the integrand is
entire in t, so the rule converges exponentially.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np
from scipy import special

from ..ensembles import SpecError
from .symmetric import sekiguchi_numeric_on_exponential


def gamma1_of(beta_over) -> int:
    """gamma_1 of the superbosonization side for ordinary index 4/beta."""
    return {4: 2, 2: 1, 1: 1}[int(beta_over)]


@lru_cache(maxsize=None)
def beta_law_nodes(beta_over, nodes: int = 48):
    """Nodes and normalized weights for t ~ Beta(bt/2, bt/2) on [0, 1]."""
    a = beta_over / 2 - 1
    y, w = special.roots_jacobi(nodes, a, a)
    return (1 + y) / 2, w / w.sum()


def _rows(s, t):
    s1, s2 = s
    return np.stack([s1 * t + s2 * (1 - t), s1 * (1 - t) + s2 * t])


def bessel_phi(d: int, beta_over, r, s, nodes: int = 48) -> complex:
    """The normalized group average of exp(i tr r U s U^dag)."""
    g = gamma1_of(beta_over)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if d == 1:
        return cmath.exp(1j * g * r[0] * s[0])
    if d != 2:
        raise SpecError("matrix Bessel functions are implemented for d <= 2")
    if beta_over == 2:
        x = (r[0] - r[1]) * (s[0] - s[1])
        if abs(x) > 1e-6:
            num = cmath.exp(1j * (r[0] * s[0] + r[1] * s[1])) - cmath.exp(1j * (r[0] * s[1] + r[1] * s[0]))
            return num / (1j * x)
    t, w = beta_law_nodes(beta_over, nodes)
    A = _rows(s, t)
    return complex(np.sum(w * np.exp(1j * g * (r[0] * A[0] + r[1] * A[1]))))


def bessel_D_phi(d: int, beta_over, r, s, nodes: int = 48) -> complex:
    """The eigen-operator applied to phi(., s) at r, differentiated under the integral."""
    g = gamma1_of(beta_over)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if d == 1:
        return 1j * g * s[0] * bessel_phi(1, beta_over, r, s)
    if d != 2:
        raise SpecError("matrix Bessel functions are implemented for d <= 2")
    t, w = beta_law_nodes(beta_over, nodes)
    A = _rows(s, t)
    e = np.exp(1j * g * (r[0] * A[0] + r[1] * A[1]))
    fac = sekiguchi_numeric_on_exponential(2, beta_over, r, A, g)
    return complex(np.sum(w * fac * e))


def hciz_symbolic():
    """Closed form for d = 2, 4/beta = 2 as a sympy expression in (r1, r2, s1, s2)."""
    import sympy as sp

    r1, r2, s1, s2 = sp.symbols("r1 r2 s1 s2", real=True)
    expr = (sp.exp(sp.I * (r1 * s1 + r2 * s2)) - sp.exp(sp.I * (r1 * s2 + r2 * s1))) / (
        sp.I * (r1 - r2) * (s1 - s2)
    )
    return expr, (r1, r2, s1, s2)


def hciz_D_residual(r, s, beta_over=2) -> tuple[complex, complex]:
    """(D phi, (i)^2 s1 s2 phi) for the closed form, with exact symbolic derivatives."""
    import sympy as sp

    expr, (r1, r2, s1, s2) = hciz_symbolic()
    D = sp.diff(expr, r1, r2) + sp.Rational(beta_over, 2) * (sp.diff(expr, r2) - sp.diff(expr, r1)) / (r1 - r2)
    vals = {r1: r[0], r2: r[1], s1: s[0], s2: s[1]}
    lhs = complex(sp.N(D.subs(vals), 30))
    rhs = complex(sp.N((-s1 * s2 * expr).subs(vals), 30))
    return lhs, rhs


def haar_sample_modulus(beta_over, size: int, rng: np.random.Generator) -> np.ndarray:
    """|U_11|^2 for Haar-random U in O(2), U(2) or USp(4), from a random unit column."""
    k = int(beta_over)
    x = rng.standard_normal((size, 2 * k))
    return (x[:, :k] ** 2).sum(axis=1) / (x**2).sum(axis=1)


def bessel_phi_monte_carlo(beta_over, r, s, samples: int, rng: np.random.Generator) -> complex:
    g = gamma1_of(beta_over)
    t = haar_sample_modulus(beta_over, samples, rng)
    A = _rows(np.asarray(s, dtype=float), t)
    return complex(np.mean(np.exp(1j * g * (r[0] * A[0] + r[1] * A[1]))))


def eigenvalue(d: int, beta_over, s) -> complex:
    """(i gamma_1)^d prod s."""
    g = gamma1_of(beta_over)
    return (1j * g) ** d * math.prod(float(x) for x in np.atleast_1d(s)[:d])


__all__ = [
    "bessel_D_phi",
    "bessel_phi",
    "bessel_phi_monte_carlo",
    "beta_law_nodes",
    "eigenvalue",
    "gamma1_of",
    "haar_sample_modulus",
    "hciz_D_residual",
    "hciz_symbolic",
]
