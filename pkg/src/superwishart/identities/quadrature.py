"""Quadrature on products of circles and on the positive half-lines.

Circle integrals carry the eigenvalue-repulsion weight
``prod_{n<m} |sin((phi_n - phi_m)/2)|^p``.  For odd ``p`` this weight has a
kink, so the trapezoidal rule would only converge algebraically.  It is
therefore integrated exactly against the Fourier expansion

    |sin(theta/2)|^p = sum_k c_k e^{i k theta},
    c_k = (-1)^k G(p+1) / (2^p G(p/2+k+1) G(p/2-k+1)),

while the smooth remainder is sampled on the uniform grid and transformed
with an FFT (product integration).  For even ``p`` the series terminates.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import special


def circle_nodes(M: int) -> np.ndarray:
    """Uniform nodes in [0, 2 pi)."""
    return 2.0 * np.pi * np.arange(M) / M


@lru_cache(maxsize=None)
def sin_power_coefficients(p: float, kmax: int) -> np.ndarray:
    """c_k for k = 0..kmax (the series is even in k).

    Built from c_0 by the ratio c_{k+1} / c_k = (k - p/2) / (k + 1 + p/2),
    which stays finite where the reciprocal gammas over- and underflow.
    """
    c = np.empty(kmax + 1)
    c[0] = math.gamma(p + 1) / (2.0**p * math.gamma(p / 2 + 1) ** 2)
    for k in range(kmax):
        c[k + 1] = c[k] * (k - p / 2) / (k + 1 + p / 2)
    return c


def circle_grid(d: int, M: int) -> np.ndarray:
    """All points of the d-fold uniform grid, shape (M**d, d)."""
    if d == 0:
        return np.zeros((1, 0))
    axes = np.meshgrid(*([circle_nodes(M)] * d), indexing="ij")
    return np.stack([a.ravel() for a in axes], axis=-1)


def circle_average(values, d: int, M: int, power: float = 0.0) -> np.ndarray:
    """Approximate int prod dphi/(2 pi) g(phi) prod_{n<m} |sin((phi_n-phi_m)/2)|^power.

    ``values`` holds g on :func:`circle_grid` in its last axis.  Leading axes
    are kept.  ``power`` is only used for d >= 2; for d > 2 it must be an even
    integer (the weight is then a trigonometric polynomial).
    """
    g = np.asarray(values)
    lead = g.shape[:-1]
    if d == 0:
        return g[..., 0]
    if d == 1 or power == 0:
        return g.mean(axis=-1)
    if d == 2:
        G = np.fft.fft2(g.reshape(lead + (M, M)), axes=(-2, -1)) / (M * M)
        kmax = M // 2 - 1
        c = sin_power_coefficients(float(power), kmax)
        k = np.arange(-kmax, kmax + 1)
        terms = G[..., (-k) % M, k % M]
        return np.tensordot(terms, c[np.abs(k)], axes=([-1], [0]))
    if float(power) % 2:
        raise ValueError("odd repulsion power is only supported for d <= 2")
    phis = circle_grid(d, M)
    w = np.ones(len(phis))
    for n in range(d):
        for m in range(n + 1, d):
            w = w * np.abs(np.sin((phis[:, n] - phis[:, m]) / 2)) ** power
    return (g * w).mean(axis=-1)


def signed_vandermonde_phase(phis: np.ndarray, power: float) -> np.ndarray:
    """prod_{n<m} (2i e^{i(phi_n+phi_m)/2})^power.

    Together with the |sin|^power weight of :func:`circle_average` this is the
    sign-adjusted Vandermonde factor: each difference e^{i phi_n} - e^{i phi_m}
    enters with sign + when phi_m < phi_n.  Angles must lie in [0, 2 pi).
    """
    phis = np.atleast_2d(phis)
    d = phis.shape[1]
    out = np.ones(phis.shape[0], dtype=complex)
    for n in range(d):
        for m in range(n + 1, d):
            out = out * (2j) ** power * np.exp(0.5j * power * (phis[:, n] + phis[:, m]))
    return out


def signed_vandermonde(phis: np.ndarray, power: float) -> np.ndarray:
    """Direct evaluation of prod_{n<m} [sgn(phi_n - phi_m)(e^{i phi_n} - e^{i phi_m})]^power."""
    phis = np.atleast_2d(phis)
    d = phis.shape[1]
    out = np.ones(phis.shape[0], dtype=complex)
    for n in range(d):
        for m in range(n + 1, d):
            diff = np.exp(1j * phis[:, n]) - np.exp(1j * phis[:, m])
            out = out * (np.sign(phis[:, n] - phis[:, m]) * diff) ** power
    return out


def radial_alpha(power) -> float:
    """Generalized Laguerre exponent in (-1, 0] matching the fractional part of ``power``."""
    f = float(power) % 1.0
    return f - 1.0 if f else 0.0


def laguerre_cone(c: int, rate: float, nodes: int, alpha: float = 0.0):
    """Nodes and weights for integrals over R_+^c of symmetric integrands.

    Integer powers: the ordered region lam_1 < ... < lam_c is parametrized by
    positive gaps lam_k = t_1 + ... + t_k; the gap t_k then carries the decay
    exp(-(c-k+1) rate t_k), which a Gauss-Laguerre rule absorbs exactly.

    Fractional powers (integrand ~ prod lam_k^alpha times a polynomial): c = 1
    uses the generalized Laguerre weight; c = 2 uses lam = rho (x, 1 - x) with
    a generalized Laguerre rule in rho and a Gauss-Jacobi rule in x on
    [0, 1/2] carrying x^alpha.

    The result is multiplied by the symmetry factor, so the integrand must be
    symmetric.  Returns ``(lam, w)`` with ``lam`` of shape (N, c) such that
    int h(lam) dlam ~ sum_i w_i h(lam_i) where h includes its exponential decay.
    """
    if c == 0:
        return np.zeros((1, 0)), np.ones(1)
    if rate <= 0:
        raise ValueError("the positive-cone integral needs a positive decay rate")
    if alpha and c == 1:
        u, w = special.roots_genlaguerre(nodes, alpha)
        return (u / rate)[:, None], w * np.exp(u) * u ** (-alpha) / rate
    if alpha and c == 2:
        a2 = 2 * alpha + 1
        u, wu = special.roots_genlaguerre(nodes, a2) if a2 else special.roots_laguerre(nodes)
        rho = u / rate
        wr = wu * np.exp(u) * u ** (-a2) * rho / rate
        y, wy = special.roots_jacobi(nodes, 0.0, alpha)
        x = (1 + y) / 4
        wx = wy * 4.0 ** (-alpha - 1) * x ** (-alpha)
        R, X = np.meshgrid(rho, x, indexing="ij")
        W = np.outer(wr, wx).ravel() * 2.0
        lam = np.stack([(R * X).ravel(), (R * (1 - X)).ravel()], axis=-1)
        return lam, W
    if alpha:
        raise ValueError("fractional powers are supported for c <= 2")
    per_axis = []
    for k in range(c):
        r = (c - k) * rate
        u, w = special.roots_laguerre(nodes)
        per_axis.append((u / r, w * np.exp(u) / r))
    grids = np.meshgrid(*[t for t, _ in per_axis], indexing="ij")
    wgrids = np.meshgrid(*[w for _, w in per_axis], indexing="ij")
    t = np.stack([g.ravel() for g in grids], axis=-1)
    w = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    lam = np.cumsum(t, axis=1)
    return lam, w * math.factorial(c)


def abs_vandermonde(lam: np.ndarray, power: float) -> np.ndarray:
    lam = np.atleast_2d(lam)
    out = np.ones(lam.shape[0])
    for n in range(lam.shape[1]):
        for m in range(n + 1, lam.shape[1]):
            out = out * np.abs(lam[:, m] - lam[:, n]) ** power
    return out


__all__ = [
    "abs_vandermonde",
    "circle_average",
    "circle_grid",
    "circle_nodes",
    "laguerre_cone",
    "radial_alpha",
    "signed_vandermonde",
    "signed_vandermonde_phase",
    "sin_power_coefficients",
]
