"""Right hand sides of the superbosonization formula and of the generalized
Hubbard-Stratonovich transformation.

Both integrate over supermatrices rho = [[rho1, rho_eta], [-rho_eta^dag, rho2]].
For superfunctions of supertraces only, the integrand is invariant under the
rotations diagonalizing rho1 and rho2 (they can be absorbed into the
Grassmann block without a Berezinian), so rho1 = diag(lam) and rho2 =
diag(e^{i phi}) resp. diag(r).  The group integrals then leave the flag
volumes FU and the Vandermonde weights.

Layouts (grouped, Kramers copies in the second half of a block):

* beta = 2: rho1 c x c, rho2 d x d, rho_eta = eta (c x d)
* beta = 1: rho1 c x c, rho2 2d x 2d doubled, rho_eta = [eta, eta^*]
* beta = 4: rho1 2c x 2c doubled, rho2 d x d, rho_eta = [eta; eta^*]

eta_{jm} is the pair of generators 2(j d + m), 2(j d + m) + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy as sp

from ..ensembles import SpecError, WishartSpec, kappa
from ..grassmann import GrassmannElement, berezin_all, body, ga_conjugate, ga_pow_even
from ..integrator import QuadratureSpec, Superfunction
from ..jets import Jet
from ..supermatrix import SuperMatrix, SuperShape, even_det
from . import constants as K
from .quadrature import abs_vandermonde, circle_average, circle_grid, laguerre_cone, radial_alpha, signed_vandermonde_phase
from .symmetric import operator_weight, partitions

MAX_D = 2


@dataclass(frozen=True)
class RhsQuadrature:
    """Node counts for the eigenvalue integrals."""

    radial_nodes: int = 24
    circle_nodes: int = 32

    @classmethod
    def from_spec(cls, q: QuadratureSpec | None):
        if q is None or q.nodes_per_dim is None:
            return cls()
        return cls(radial_nodes=max(q.nodes_per_dim, 8), circle_nodes=max(q.nodes_per_dim, 16))


@dataclass
class RhsResult:
    value: complex
    integral: complex
    constant: complex
    points: int
    details: dict = field(default_factory=dict)


def _check(spec: WishartSpec):
    if spec.b != 0:
        raise SpecError("the right hand sides need b = 0")
    if spec.a < spec.c:
        raise SpecError(f"need a >= c (got a={spec.a}, c={spec.c}); otherwise the right hand side vanishes")
    if spec.d > MAX_D:
        raise SpecError(f"d <= {MAX_D} supported, got d={spec.d}")


def eta_block(beta: int, c: int, d: int, n: int):
    """rho_eta and -rho_eta^dag as grids of generators."""
    eta = [[GrassmannElement.generator(n, 2 * (j * d + m)) for m in range(d)] for j in range(c)]
    etas = [[GrassmannElement.generator(n, 2 * (j * d + m) + 1) for m in range(d)] for j in range(c)]
    if beta == 2:
        B = eta
    elif beta == 1:
        B = [eta[j] + etas[j] for j in range(c)]
    else:
        B = eta + etas
    C = [[-ga_conjugate(B[i][j]) for i in range(len(B))] for j in range(len(B[0]) if B else 0)]
    return B, C


def _doubled(beta, block: str, values):
    """Diagonal entries of rho1 ('boson') or rho2 ('fermion') in grouped layout."""
    if beta == 4 and block == "boson" or beta == 1 and block == "fermion":
        return list(values) + list(values)
    return list(values)


def _diag_grid(entries, n):
    k = len(entries)
    z = GrassmannElement.zero(n)
    return [[GrassmannElement.scalar(n, entries[i]) if i == j else z for j in range(k)] for i in range(k)]


def _assemble(beta, c, d, n, rho1_diag, rho2_grid):
    B, C = eta_block(beta, c, d, n)
    A = _diag_grid(_doubled(beta, "boson", rho1_diag), n)
    return SuperMatrix.from_blocks(A, B, C, rho2_grid, n)


def _berezin_array(x: GrassmannElement, npts: int) -> np.ndarray:
    top = berezin_all(x)
    v = body(top)
    return np.broadcast_to(np.asarray(v, dtype=complex), (npts,)) if not isinstance(v, Jet) else v


# superbosonization


def sb_integral(beta: int, c: int, d: int, kap, G, rate: float, rq: RhsQuadrature = RhsQuadrature()):
    """int d[rho] G(rho) Sdet rho^kap over the set with compact Fermion-Fermion block.

    ``G`` maps a batched supermatrix to an even Grassmann element; ``rate``
    is the exponential decay of G in the eigenvalues of rho1 (used to scale
    the Laguerre nodes).  Returns the integral and the number of points.
    """
    n = 2 * c * d
    g1 = 2 if beta == 1 else 1
    g2 = 2 if beta == 4 else 1
    kap = Fraction(kap)
    lam, wl = laguerre_cone(c, g2 * rate, rq.radial_nodes, alpha=radial_alpha(g2 * kap))
    M = rq.circle_nodes if d else 1
    phis = circle_grid(d, M)
    NL, NP = len(wl), len(phis)
    # batch layout: (lambda index, phi index) flattened
    L = np.repeat(lam, NP, axis=0)
    P = np.tile(phis, (NL, 1))
    npts = NL * NP
    u = np.exp(1j * P)
    rho2 = _diag_grid([u[:, m] for m in _doubled(beta, "fermion", range(d))], n)
    rho = _assemble(beta, c, d, n, [L[:, j] for j in range(c)], rho2)
    # Sdet^kappa = det(rho1 + rho_eta rho2^-1 rho_eta^dag)^kappa * prod e^{-i g1 kappa phi}
    a_, b_, c_, _ = rho.blocks()
    uinv = [1.0 / u[:, m] for m in _doubled(beta, "fermion", range(d))]
    M_grid = [
        [a_[i][j] + sum((b_[i][k] * uinv[k] * c_[k][j] for k in range(len(uinv))), GrassmannElement.zero(n)) * -1
         for j in range(len(a_))]
        for i in range(len(a_))
    ]
    if a_:
        sd = ga_pow_even(even_det(M_grid, n), kap)
    else:
        sd = GrassmannElement.one(n)
    phase = np.exp(-1j * g1 * float(kap) * P.sum(axis=1)) * np.prod(u, axis=1)  # Sdet part and d e^{i phi}/(2 pi i)
    if d >= 2:
        phase = phase * signed_vandermonde_phase(P, 4 / beta)
    vals = _berezin_array(G(rho) * sd, npts) * phase
    vals = vals.reshape(NL, NP)
    ang = circle_average(vals, d, M, power=4 / beta) if d else vals[:, 0]
    radial = np.sum(wl * abs_vandermonde(lam, beta) * ang)
    fu = K.numeric(K.flag_ratio_FU(beta, c) * K.flag_ratio_FU(sp.Rational(4, beta), d))
    return complex(fu * radial), npts


def rhs_superbosonization(spec: WishartSpec, F: Superfunction, epsilon: float = 1.0, q: QuadratureSpec | None = None):
    """C_acd times the superbosonization integral of F(rho) exp(-eps Str rho)."""
    _check(spec)
    rq = RhsQuadrature.from_spec(q)
    kap = kappa(spec, "thm1")
    rate = epsilon + F.t
    if spec.c and rate <= 0:
        raise SpecError("the superbosonization integral needs epsilon + t > 0")
    integral, npts = sb_integral(spec.beta, spec.c, spec.d, kap, lambda r: F.integrand(r, epsilon), rate, rq)
    const = K.numeric(K.constant_C(spec))
    return RhsResult(const * integral, integral, const, npts, {"kappa": str(kap)})


# generalized Hubbard-Stratonovich


def _hs_Gtilde(spec: WishartSpec, F: Superfunction, epsilon: float, lam: np.ndarray, order: int):
    """Berezin integral over eta of F(rho^) exp(-eps Str rho^) as a jet in r."""
    beta, c, d = spec.beta, spec.c, spec.d
    n = 2 * c * d
    npts = lam.shape[0]
    rvars = [Jet.variable(d, order, m) for m in range(d)]
    r_entries = _doubled(beta, "fermion", rvars)
    rho1 = _doubled(beta, "boson", [lam[:, j] for j in range(c)])
    B, C = eta_block(beta, c, d, n)
    A = _diag_grid(rho1, n)
    inv1 = [1.0 / x for x in rho1]
    q = len(r_entries)
    D = [
        [
            (GrassmannElement.scalar(n, r_entries[i]) if i == j else GrassmannElement.zero(n))
            + sum((C[i][k] * inv1[k] * B[k][j] for k in range(len(inv1))), GrassmannElement.zero(n))
            for j in range(q)
        ]
        for i in range(q)
    ]
    rho = SuperMatrix.from_blocks(A, B, C, D, n)
    top = berezin_all(F.integrand(rho, epsilon))
    v = body(top)
    if not isinstance(v, Jet):
        v = Jet.constant(d, order, np.broadcast_to(np.asarray(v, dtype=complex), (npts,)))
    return v


def _jet_coeff(jet: Jet, e, npts):
    return np.broadcast_to(np.asarray(jet.coefficient(e), dtype=complex), (npts,))


def hs_delta_functional(spec: WishartSpec, jet: Jet, npts: int, method: str):
    """Pairs the r-dependence with the Dirac-distribution derivatives at r = 0."""
    beta, a, c, d = spec.beta, spec.a, spec.c, spec.d
    fu = K.flag_ratio_FU(sp.Rational(4, beta), d)
    if d == 0:
        return _jet_coeff(jet, (), npts)
    if method == "sekiguchi":
        p = a - c
        out = np.zeros(npts, dtype=complex)
        for lam_ in partitions(d * p, d):
            w = operator_weight(d, sp.Rational(4, beta), p, lam_, (-1) ** d)
            if w != 0:
                out = out + complex(w) * _jet_coeff(jet, lam_, npts)
        return complex(K.numeric(fu)) * out
    if method == "delta":
        if beta == 4:
            raise SpecError("the derivative-of-delta form needs beta in {1, 2}")
        gk = int(spec.gamma1 * kappa(spec, "thm1"))
        t = sp.Rational(2, beta)
        pref = fu
        for nn in range(1, d + 1):
            pref *= sp.gamma(a - c + 1 + t * (nn - 1)) / ((-sp.pi) ** (t * (nn - 1)) * sp.gamma(gk))
        # int d[rho2] f prod d^{gk-1} delta = FU (-1)^{d(gk-1)} prod d^{gk-1} [Delta^{4/beta} f](0)
        rs = sp.symbols(f"x1:{d + 1}")
        vdm = sp.Integer(1)
        for i in range(d):
            for j in range(i + 1, d):
                vdm *= rs[i] - rs[j]
        poly = sp.Poly(sp.expand(vdm ** int(4 / beta)), *rs)
        target = (gk - 1,) * d
        out = np.zeros(npts, dtype=complex)
        for mono, coef in poly.terms():
            e = tuple(ti - mi for ti, mi in zip(target, mono))
            if min(e) < 0:
                continue
            out = out + complex(coef) * _jet_coeff(jet, e, npts)
        fact = sp.factorial(gk - 1) ** d * (-1) ** (d * (gk - 1))
        return complex(K.numeric(fu * pref * fact)) * out
    raise ValueError(f"unknown method {method!r}")


def rhs_hubbard_stratonovich(
    spec: WishartSpec,
    F: Superfunction,
    epsilon: float = 1.0,
    q: QuadratureSpec | None = None,
    method: str | None = None,
):
    """C~ times the integral with the Dirac distribution at r = 0.

    ``method`` is ``delta`` (explicit derivatives of delta, beta in {1, 2}) or
    ``sekiguchi`` (the operator form, any beta).  The default follows beta.
    """
    _check(spec)
    if method is None:
        method = "sekiguchi" if spec.beta == 4 else "delta"
    rq = RhsQuadrature.from_spec(q)
    beta, c, d = spec.beta, spec.c, spec.d
    kap = kappa(spec, "thm1")
    g2 = spec.gamma2
    rate = epsilon + F.t
    if c and rate <= 0:
        raise SpecError("the Hubbard-Stratonovich integral needs epsilon + t > 0")
    if method == "delta":
        order = d * (int(spec.gamma1 * kap) - 1)
    else:
        order = d * (spec.a - c)
    lam, wl = laguerre_cone(c, g2 * rate, rq.radial_nodes, alpha=radial_alpha(g2 * kap))
    npts = len(wl)
    jet = _hs_Gtilde(spec, F, epsilon, lam, max(order, 0))
    vals = hs_delta_functional(spec, jet, npts, method)
    det1 = np.prod(lam, axis=1) ** (g2 * float(kap)) if c else np.ones(npts)
    radial = np.sum(wl * abs_vandermonde(lam, beta) * det1 * vals)
    integral = complex(K.numeric(K.flag_ratio_FU(beta, c))) * radial
    const = K.numeric(K.constant_Ctilde(spec))
    return RhsResult(const * integral, integral, const, npts, {"kappa": str(kap), "method": method})


__all__ = [
    "RhsQuadrature",
    "RhsResult",
    "eta_block",
    "hs_delta_functional",
    "rhs_hubbard_stratonovich",
    "rhs_superbosonization",
    "sb_integral",
]
