"""Verification of the integral identities, one function per identity.

Every check returns a :class:`VerificationReport`.  Exact checks report an
absolute error of zero when sympy proves equality.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction

import numpy as np
import sympy as sp
from scipy import integrate

from ..ensembles import SpecError, WishartSpec, build_V_dagger, duality_check, kappa, random_sample, split_B, build_V
from ..exact import GaussRat
from ..grassmann import GrassmannElement, berezin_all, body, ga_exp_even
from ..integrator import (
    QuadratureSpec,
    Superfunction,
    gaussian_vector_closed_form,
    gaussian_vector_integral,
    lhs_integral,
)
from ..report import VerificationReport, combine
from ..supermatrix import (
    SuperMatrix,
    SuperShape,
    adjoint,
    s_operator,
    sdet,
    sm_conjugate,
    supertrace,
)
from . import constants as K
from .bessel import bessel_D_phi, bessel_phi, eigenvalue, gamma1_of, hciz_D_residual
from .quadrature import (
    abs_vandermonde,
    circle_average,
    circle_grid,
    laguerre_cone,
    signed_vandermonde_phase,
)
from .rhs import rhs_hubbard_stratonovich, rhs_superbosonization, sb_integral
from .symmetric import SymmetricPolynomial, sekiguchi_power, symbols


def _spec_gammas(beta):
    return (2 if beta == 1 else 1), (2 if beta == 4 else 1)


# algebraic checks


def duality_suite(spec: WishartSpec, m_max: int = 4, draws: int = 100, seed: int = 0, tol: float = 1e-12):
    rng = np.random.default_rng(seed)
    V = build_V(spec, random_sample(spec, rng, draws))
    rep = duality_check(spec, V, m_max, tol=tol, seed=seed)
    rep.details["draws"] = draws
    return rep


def calibration_check(spec: WishartSpec) -> VerificationReport:
    """int exp(tr B) d[V] = (-2 pi)^{-ad} for c = 0, evaluated symbolically."""
    if spec.c or spec.b:
        raise SpecError("the calibration identity needs b = c = 0")
    Vd = build_V_dagger(spec, np.zeros(0))
    Vd = Vd.map(lambda x: GrassmannElement(x.n, {k: sp.Integer(int(v)) for k, v in x.terms.items()}))
    V = adjoint(Vd)
    B = (V * adjoint(V)) * sp.Rational(1, spec.gamma_tilde)
    tr = GrassmannElement.zero(B.n)
    for i in range(B.shape.rows):
        tr = tr + B.entries[i][i]
    val = body(berezin_all(ga_exp_even(tr), nu=1 / sp.sqrt(2 * sp.pi)))
    expect = (-2 * sp.pi) ** (-spec.a * spec.d)
    exact_equal = sp.simplify(val - expect) == 0
    lhs, rhs = complex(sp.N(val, 30)), complex(sp.N(expect, 30))
    return VerificationReport.compare(
        "calibration",
        lhs,
        rhs,
        0.0,
        spec=spec,
        abs_error=0.0 if exact_equal else abs(lhs - rhs),
        mode="abs",
        label="symbolic",
        details={"value": str(sp.simplify(val))},
    )


def gaussian_vector_check(spec: WishartSpec, seed: int = 0, nodes: int = 32, tol: float = 1e-8):
    """Gaussian vector integral against det(sigma+/(i g1 pi))^{-a/g1} at a random sigma+."""
    rng = np.random.default_rng(seed)
    c = spec.c
    X = rng.standard_normal((c, c)) + 1j * rng.standard_normal((c, c))
    H = (X + X.conj().T) / 2
    sigma_plus = H + 1j * (c + 1.0) * np.eye(c)
    num = gaussian_vector_integral(spec, sigma_plus, nodes=nodes).value
    ref = gaussian_vector_closed_form(spec, sigma_plus)
    return VerificationReport.compare("gaussian_vector", num, ref, tol, spec=spec, seed=seed, mode="rel")


def constants_check(spec: WishartSpec, tol: float = 1e-12) -> VerificationReport:
    """C~/C from the two prefactors against the closed product."""
    ratio = K.numeric(K.constant_Ctilde(spec)) / K.numeric(K.constant_C(spec))
    ref = K.numeric(K.constant_ratio(spec))
    return VerificationReport.compare("constants", ratio, ref, tol, spec=spec, mode="rel")


def _random_element(n, parity, rng, density=0.6):
    terms = {}
    for key in range(1 << n):
        if bin(key).count("1") % 2 != parity:
            continue
        if key and rng.random() > density:
            continue
        terms[key] = GaussRat(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))),
                              Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))))
    if parity == 0 and 0 in terms and not terms[0]:
        terms[0] = GaussRat(1)
    return GrassmannElement(n, terms)


def random_supermatrix(shape: SuperShape, n: int, rng, invertible: bool = False) -> SuperMatrix:
    """Exact random supermatrix with rational Gaussian coefficients."""
    grid = []
    for i in range(shape.rows):
        fi = i >= shape.boson_rows
        row = []
        for j in range(shape.cols):
            fj = j >= shape.boson_cols
            row.append(_random_element(n, int(fi != fj), rng))
        grid.append(row)
    if invertible:
        for i in range(min(shape.rows, shape.cols)):
            grid[i][i] = grid[i][i] + GaussRat(10 * (i + 1))
    return SuperMatrix(shape, grid, n)


def s_operator_check(draws: int = 100, seed: int = 0, n: int = 4) -> VerificationReport:
    """Adjoint, conjugation, square, product and Sdet rules of the S operator, exactly."""
    rng = np.random.default_rng(seed)
    failures = []
    for k in range(draws):
        m1, m2, n1, n2, k1, k2 = (int(x) for x in rng.integers(0, 3, size=6))
        sig = random_supermatrix(SuperShape(m1, m2, n1, n2), n, rng)
        if not s_operator(adjoint(sig)) == adjoint(s_operator(sig)):
            failures.append((k, "adjoint"))
        if not s_operator(sm_conjugate(sig)) == sm_conjugate(s_operator(sig)):
            failures.append((k, "conjugate"))
        if not s_operator(s_operator(sig)) == -sig:
            failures.append((k, "square"))
        rho = random_supermatrix(SuperShape(n1, n2, k1, k2), n, rng)
        z = GrassmannElement.zero(n)
        rho = SuperMatrix(rho.shape, [r if i < n1 else [z] * rho.shape.cols for i, r in enumerate(rho.entries)], n)
        if not s_operator(sig * rho) == s_operator(sig) * s_operator(rho):
            failures.append((k, "product"))
        p, q = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        sq = random_supermatrix(SuperShape(p, q, p, q), n, rng, invertible=True)
        lhs = sdet(s_operator(sq))
        rhs = (-1) ** q * (GrassmannElement.one(n) / sdet(sq))
        if not lhs == rhs:
            failures.append((k, "sdet"))
    return VerificationReport.compare(
        "s_operator", len(failures), 0, 0.0, seed=seed, mode="abs", label=f"{draws} draws",
        details={"failures": failures[:10]},
    )


def split_check(spec: WishartSpec, draws: int = 100, seed: int = 0) -> VerificationReport:
    """B = B1 + S(B2) entrywise on random draws."""
    rng = np.random.default_rng(seed)
    V = build_V(spec, random_sample(spec, rng, draws))
    B = (V * adjoint(V)) * (1.0 / spec.gamma_tilde)
    B1, B2 = split_B(spec, V)
    dev = (B - (B1 + s_operator(B2))).max_abs()
    return VerificationReport.compare("split", dev, 0.0, 0.0, spec=spec, seed=seed, mode="abs", abs_error=dev)


# scalar integral identities


def ingham_siegel_scalar(a: int, rho: float, epsilons=(0.02, 0.01, 0.005), tol: float = 1e-4):
    """int exp(-i rho s) (eps - i s)^{-a} ds against 2 pi rho^{a-1} e^{-eps rho} / G(a) Theta(rho).

    The Fourier integral is taken with the oscillatory QAWF rule.  The
    limit eps -> 0 is taken by Richardson extrapolation from the ``epsilons``
    (halving grid); the finite-eps deviation is kept in the details.
    """
    if a < 1:
        raise SpecError("a must be at least 1")
    sgn = 1.0 if rho >= 0 else -1.0
    w = abs(rho)

    def numeric(eps):
        g = lambda s: (eps - 1j * s) ** (-a)
        with warnings.catch_warnings():
            # QAWF flags slowly converging cycles for a = 1; the extrapolation absorbs them
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            re = integrate.quad(lambda s: g(s).real, 0, np.inf, weight="cos", wvar=w, limlst=200, epsabs=1e-13)[0]
            im = integrate.quad(lambda s: g(s).imag, 0, np.inf, weight="sin", wvar=w, limlst=200, epsabs=1e-13)[0]
        return 2.0 * (re + sgn * im)

    def closed(eps):
        return 2 * math.pi * rho ** (a - 1) * math.exp(-eps * rho) / math.gamma(a) if rho > 0 else 0.0

    vals = [numeric(e) for e in epsilons]
    finite_dev = max(abs(v - closed(e)) for v, e in zip(vals, epsilons))
    # Richardson on a halving grid, error O(eps)
    t = list(vals)
    for k in range(1, len(t)):
        t = [(2**k * t[i + 1] - t[i]) / (2**k - 1) for i in range(len(t) - 1)]
    extrap = t[0]
    return _ingham_report(a, rho, extrap, closed(0.0), tol, finite_dev, epsilons)


def _ingham_report(a, rho, lhs, rhs, tol, finite_dev, epsilons):
    rep = VerificationReport.compare(
        "ingham_siegel",
        lhs,
        rhs,
        tol,
        mode="abs",
        label=f"a={a} rho={rho:g}",
        details={"finite_eps_deviation": finite_dev, "epsilons": list(epsilons)},
    )
    rep.beta, rep.a, rep.c, rep.d, rep.b = 2, a, 1, 0, 0
    return rep


def circular_selberg_check(d: int, beta: int, a: int, nodes: int = 256, form: str = "modulus", tol: float = 1e-10):
    """Circle integral with |sin| repulsion (``modulus``) or the signed
    Vandermonde contour form (``signed``) against the gamma-product value."""
    if d > 2:
        raise SpecError("circular check supports d <= 2")
    g1, g2 = _spec_gammas(beta)
    bt = 4 / beta
    phis = circle_grid(d, nodes)
    ssum = phis.sum(axis=1)
    expo = np.exp(g1 * np.exp(1j * phis).sum(axis=1))
    if form == "modulus":
        vals = expo * np.exp(-1j * a * ssum)
        lhs = 2 ** (bt * d * (d - 1) / 2) * circle_average(vals, d, nodes, bt)
        rhs = g1 ** (a * d)
        for n in range(1, d + 1):
            rhs *= math.gamma(1 + n * bt / 2) / (math.gamma(1 + bt / 2) * math.gamma(a + 1 + (n - 1) * bt / 2))
    elif form == "signed":
        spec = WishartSpec(beta, a, 0, 0, d)
        gk = g1 * float(kappa(spec, "pure_fermionic"))
        fu = K.numeric(K.flag_ratio_FU(sp.Rational(4, beta), d))
        vals = expo * np.exp(-1j * (gk - 1) * ssum)
        if d >= 2:
            vals = vals * signed_vandermonde_phase(phis, bt)
        lhs = fu * circle_average(vals, d, nodes, bt)
        rhs = (g1 ** (a * d)) * fu * K.numeric(K.gamma_product(WishartSpec(beta, a, 0, 0, d)))
    else:
        raise ValueError(f"unknown form {form!r}")
    rep = VerificationReport.compare("circular", lhs, rhs, tol, mode="abs", label=f"{form} d={d} a={a}")
    rep.beta, rep.a, rep.b, rep.c, rep.d = beta, a, 0, 0, d
    return rep


def laguerre_selberg_check(d: int, beta_tilde: int, xi: int, nodes: int = 20, tol: float = 1e-8):
    """int_{R+^d} |Delta|^bt prod e^{-g1 x} x^xi dx against the gamma product."""
    g1 = gamma1_of(beta_tilde)
    lam, w = laguerre_cone(d, g1, nodes)
    vals = abs_vandermonde(lam, beta_tilde) * np.prod(np.exp(-g1 * lam) * lam**xi, axis=1)
    lhs = float(np.sum(w * vals))
    rhs = 1.0
    for n in range(1, d + 1):
        rhs *= math.gamma(1 + n * beta_tilde / 2) * math.gamma(xi + 1 + (n - 1) * beta_tilde / 2)
        rhs /= g1 ** (xi + 1 + beta_tilde * (d - 1) / 2) * math.gamma(1 + beta_tilde / 2)
    rep = VerificationReport.compare("laguerre_selberg", lhs, rhs, tol, mode="rel", label=f"d={d} bt={beta_tilde} xi={xi}")
    rep.d = d
    return rep


def bessel_eigen_check(d: int, beta_over: int, r, s, tol: float | None = None):
    """The eigen-operator on the matrix Bessel function against (i g1)^d prod s times it."""
    if d == 2 and beta_over == 2:
        lhs, rhs = hciz_D_residual(r, s, beta_over)
        label = "closed form"
        tol = 1e-8 if tol is None else tol
    else:
        lhs = bessel_D_phi(d, beta_over, r, s)
        rhs = eigenvalue(d, beta_over, s) * bessel_phi(d, beta_over, r, s)
        label = "exact" if d == 1 else "group quadrature"
        tol = (1e-12 if d == 1 else 1e-5) if tol is None else tol
    rep = VerificationReport.compare("bessel_eigen", lhs, rhs, tol, mode="either", label=f"{label} bt={beta_over}")
    rep.d = d
    return rep


# equivalence identity


def identity61_sides(spec: WishartSpec, Ftilde: SymmetricPolynomial, nodes: int = 64):
    """(circle side, operator side) of the equivalence identity.

    Exact sympy numbers for beta in {1, 2}; complex numbers for beta = 4.
    """
    beta, a, c, d = spec.beta, spec.a, spec.c, spec.d
    if a < c:
        raise SpecError("need a >= c")
    if Ftilde.d != d:
        raise SpecError("symmetric polynomial has the wrong number of variables")
    g1 = spec.gamma1
    gk = g1 * kappa(spec, "thm1")
    rs = symbols(d)
    f_expr = Ftilde.to_expr(rs)
    op = sekiguchi_power(d, sp.Rational(4, beta), f_expr, a - c, 1, rs)
    op0 = op.subs({r: 0 for r in rs}) if d else op
    rhs = K.gamma_product(spec) * op0
    if beta in (1, 2):
        if d == 0:
            return sp.nsimplify(f_expr), sp.nsimplify(rhs)
        # constant term of F(x) Delta(x)^{4/beta} prod x^{1 - g1 kappa}
        vdm = sp.Integer(1)
        for i in range(d):
            for j in range(i + 1, d):
                vdm *= rs[i] - rs[j]
        poly = sp.Poly(sp.expand(f_expr * vdm ** (4 // beta)), *rs)
        k = int(gk) - 1
        lhs = poly.coeff_monomial(tuple([k] * d)) if k >= 0 else sp.Integer(0)
        return sp.nsimplify(lhs), sp.simplify(rhs)
    f_num = sp.lambdify(rs, f_expr, "numpy")
    phis = circle_grid(d, nodes)
    x = np.exp(1j * phis)
    fv = np.broadcast_to(np.asarray(f_num(*[x[:, i] for i in range(d)]), dtype=complex), (len(phis),))
    vals = fv * np.exp(1j * (1 - float(gk)) * phis.sum(axis=1))
    if d >= 2:
        vals = vals * signed_vandermonde_phase(phis, 4 / beta)
    lhs = complex(circle_average(vals, d, nodes, 4 / beta))
    return lhs, K.numeric(rhs)


def identity61_check(spec: WishartSpec, Ftilde: SymmetricPolynomial, tol: float = 1e-8) -> VerificationReport:
    lhs, rhs = identity61_sides(spec, Ftilde)
    label = "+".join(f"{c}*m{''.join(map(str, lam))}" for lam, c in Ftilde.coeffs) or "0"
    if spec.beta in (1, 2):
        equal = sp.simplify(lhs - rhs) == 0
        L, R = K.numeric(lhs), K.numeric(rhs)
        return VerificationReport.compare(
            "equivalence61", L, R, 0.0, spec=spec, mode="abs", abs_error=0.0 if equal else abs(L - R) or 1.0,
            label=f"exact {label}", details={"lhs": str(lhs), "rhs": str(rhs)},
        )
    return VerificationReport.compare("equivalence61", lhs, rhs, tol, spec=spec, mode="abs", label=f"numeric {label}")


# theorem checks


def theorem1_check(spec: WishartSpec, F: Superfunction, epsilon: float = 1.0, q: QuadratureSpec | None = None,
                   tol: float = 2e-4, lhs=None) -> VerificationReport:
    q = q or QuadratureSpec(epsilon=epsilon)
    lhs = lhs if lhs is not None else lhs_integral(spec, F, q).value
    rhs = rhs_superbosonization(spec, F, epsilon, q).value
    return VerificationReport.compare("theorem1", lhs, rhs, tol, spec=spec, seed=q.seed, mode="rel", label=F.name)


def theorem2_check(spec: WishartSpec, F: Superfunction, epsilon: float = 1.0, q: QuadratureSpec | None = None,
                   tol: float = 2e-4, lhs=None, sb=None) -> VerificationReport:
    """Hubbard-Stratonovich value against the direct integral and the superbosonization value."""
    q = q or QuadratureSpec(epsilon=epsilon)
    lhs = lhs if lhs is not None else lhs_integral(spec, F, q).value
    sb = sb if sb is not None else rhs_superbosonization(spec, F, epsilon, q).value
    hs = rhs_hubbard_stratonovich(spec, F, epsilon, q)
    parts = [
        VerificationReport.compare("theorem2", hs.value, lhs, tol, spec=spec, mode="rel", label=f"{F.name} vs direct"),
        VerificationReport.compare("theorem2", hs.value, sb, tol, spec=spec, mode="rel", label=f"{F.name} vs superbosonization"),
    ]
    out = combine("theorem2", parts, label=f"{F.name} {hs.details['method']}", spec=spec, seed=q.seed)
    out.lhs_value, out.rhs_value = hs.value, lhs
    return out


def _wick_phase(psi):
    return complex(math.cos(psi), math.sin(psi))


def theorem4_rhs(spec: WishartSpec, e: int, F: Superfunction, epsilon: float, psi: float, rq=None):
    """Double-supermatrix superbosonization value for Str-only F.

    rho^(1) runs over the compact-FF set at index beta with (c, d) and
    rho^(2) = S(sigma) with sigma in the compact-FF set at index 4/beta with
    (d, c).  The second Sdet power is carried by 1 / Sdet sigma; the sign of
    Sdet S(sigma) is absorbed together with the orientation of the S-image,
    which leaves the overall sign (-1)^{g2 e c} of the enlargement step.
    Both exponentials and F(x + y) factorize after a binomial expansion of
    the supertrace polynomial.
    """
    from .rhs import RhsQuadrature

    rq = rq or RhsQuadrature()
    beta, a, b, c, d = spec.beta, spec.a, spec.b, spec.c, spec.d
    g1, g2 = spec.gamma1, spec.gamma2
    at, bt = a + g1 * e, b + g2 * e
    if at < c or bt < d:
        raise SpecError(f"need a + g1 e >= c and b + g2 e >= d (got {at} >= {c}, {bt} >= {d})")
    if not F.is_str_only():
        raise SpecError("only superfunctions of Str are supported here")
    if math.cos(psi) >= 0 and (c or d):
        raise SpecError("the Wick rotation must satisfy cos(psi) < 0 for convergence")
    kap = kappa(spec, "thm4")
    k1 = kap + Fraction(bt, g2)
    x2 = kap - Fraction(at, g1)
    beta2 = 4 // beta
    rate = epsilon + F.t
    ph = _wick_phase(psi)
    poly = F.str_polynomial()
    pmax = max(poly)

    def G1(k):
        def g(rho):
            s = supertrace(rho)
            out = ga_exp_even(s * (-rate))
            for _ in range(k):
                out = out * s
            return out
        return g

    def G2(j):
        def g(sig):
            y = supertrace(s_operator(sig)) * ph
            out = ga_exp_even(y * (-rate))
            for _ in range(j):
                out = out * y
            return out
        return g

    I1 = [sb_integral(beta, c, d, k1, G1(k), rate, rq)[0] for k in range(pmax + 1)]
    I2 = [sb_integral(beta2, d, c, -x2, G2(j), -rate * math.cos(psi), rq)[0] for j in range(pmax + 1)]
    total = 0j
    for p, coef in poly.items():
        for k in range(p + 1):
            total += coef * math.comb(p, k) * I1[k] * I2[p - k]
    s1 = WishartSpec(beta, at, 0, c, d)
    s2 = WishartSpec(beta2, bt, 0, d, c)
    const = (
        complex(np.exp(1j * psi * (at * d - bt * c)))
        * (-2 / g1) ** (g2 * e * c)
        * (2 / g2) ** (g1 * e * d)
        * K.numeric(K.constant_C(s1))
        * K.numeric(K.constant_C(s2))
    )
    return const * total, {"kappa": str(kap), "sdet_powers": [str(k1), str(x2)], "constant": const}


def theorem4_check(spec: WishartSpec, e: int, F: Superfunction, epsilon: float = 1.0, psi: float = math.pi,
                   q: QuadratureSpec | None = None, tol: float = 1e-3,
                   enlarged: bool = False) -> VerificationReport:
    """Direct Wick-rotated integral against the double-supermatrix formula.

    With ``enlarged`` the integral over the larger vector space is added as a
    second route; its tensor rule grows like nodes**(2 dims) and is slow.
    """
    q = q or QuadratureSpec(epsilon=epsilon, wick_angle=psi)
    q = QuadratureSpec(q.scheme, q.nodes_per_dim, q.mc_samples, q.seed, epsilon, psi)
    lhs = lhs_integral(spec, F, q).value
    rhs, det = theorem4_rhs(spec, e, F, epsilon, psi)
    parts = [VerificationReport.compare("theorem4", lhs, rhs, tol, spec=spec, e=e, seed=q.seed, mode="rel",
                                        label=f"{F.name} direct vs double supermatrix")]
    g1, g2 = spec.gamma1, spec.gamma2
    mid = None
    if enlarged:
        big = WishartSpec(spec.beta, spec.a + g1 * e, spec.b + g2 * e, spec.c, spec.d)
        mid = (-2 / g1) ** (g2 * e * spec.c) * (2 / g2) ** (g1 * e * spec.d) * lhs_integral(big, F, q).value
        parts.append(VerificationReport.compare("theorem4", mid, rhs, tol, spec=spec, e=e, seed=q.seed, mode="rel",
                                                label=f"{F.name} enlarged vs double supermatrix"))
    out = combine("theorem4", parts, label=f"{F.name} psi={psi:.6g}", spec=spec, e=e, seed=q.seed)
    out.lhs_value, out.rhs_value = lhs, rhs
    out.details.update(det)
    if mid is not None:
        out.details["enlarged"] = mid
    return out


__all__ = [
    "bessel_eigen_check",
    "calibration_check",
    "circular_selberg_check",
    "constants_check",
    "duality_suite",
    "gaussian_vector_check",
    "identity61_check",
    "identity61_sides",
    "ingham_siegel_scalar",
    "laguerre_selberg_check",
    "random_supermatrix",
    "s_operator_check",
    "split_check",
    "theorem1_check",
    "theorem2_check",
    "theorem4_check",
    "theorem4_rhs",
]
