"""Rectangular supermatrices V, supersymmetric Wishart matrices and their duals.

All quaternionic and doubled blocks use the grouped layout: a column index
``n`` of the first copy is followed by all ``n`` of the second copy, so the
reality structure reads ``Y_s (x) 1_q``.

Generator numbering (pairs ``(2p, 2p+1) = (theta, theta^*)``):

* ``chi_{jn}``  (``j < a``, ``n < d``) uses pair ``p = j*d + n``;
* ``zeta_{jn}`` (``j < b``, ``n < c``) uses pair ``p = a*d + j*c + n``.

Ordinary coordinates are a flat real vector.  A 2-d array of shape
``(coords, draws)`` evaluates many samples at once; each Grassmann
coefficient then is an array over draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .grassmann import GrassmannElement
from .report import VerificationReport
from .supermatrix import (
    ShapeError,
    SuperMatrix,
    SuperShape,
    adjoint,
    hat_y,
    is_body_unitary,
    s_operator,
    sm_conjugate,
    supertrace,
    transpose_plain,
)


class SpecError(ValueError):
    """Invalid ensemble parameters."""


@dataclass(frozen=True)
class WishartSpec:
    beta: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.beta not in (1, 2, 4):
            raise SpecError(f"beta must be 1, 2 or 4, got {self.beta}")
        for name in "abcd":
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise SpecError(f"{name} must be a non-negative integer, got {v!r}")

    @property
    def gamma1(self) -> int:
        return 2 if self.beta == 1 else 1

    @property
    def gamma2(self) -> int:
        return 2 if self.beta == 4 else 1

    @property
    def gamma_tilde(self) -> int:
        return self.gamma1 * self.gamma2

    def kappa(self, variant: str = "thm1") -> Fraction:
        return kappa(self, variant)

    @property
    def generator_count(self) -> int:
        return 2 * (self.a * self.d + self.b * self.c)

    @property
    def coordinate_count(self) -> int:
        return self.beta * self.a * self.c + (4 // self.beta) * self.b * self.d

    @property
    def v_shape(self) -> SuperShape:
        g1, g2 = self.gamma1, self.gamma2
        return SuperShape(g2 * self.c, g1 * self.d, g2 * self.a, g1 * self.b)

    def require_superbosonization_form(self):
        if self.b != 0 or self.a < self.c:
            raise SpecError(f"needs b = 0 and a >= c, got {self}")


def kappa(spec: WishartSpec, variant: str = "thm1") -> Fraction:
    """Exponent of the superdeterminant for the named integral theorem."""
    g1, g2 = Fraction(spec.gamma1), Fraction(spec.gamma2)
    a, b, c, d = spec.a, spec.b, spec.c, spec.d
    if variant == "thm1":
        return (a - c + 1) / g1 + (d - 1) / g2
    if variant == "thm4":
        return (a - c + 1) / g1 - (b - d + 1) / g2
    if variant == "ordinary_d0":
        return (a - c + 1) / g1 - 1 / g2
    if variant == "pure_fermionic":
        return (a + 1) / g1 + (d - 1) / g2
    raise SpecError(f"unknown kappa variant {variant!r}")


def chi_index(spec, j, n):
    return 2 * (j * spec.d + n)


def zeta_index(spec, j, n):
    return 2 * (spec.a * spec.d + j * spec.c + n)


def random_sample(spec: WishartSpec, rng: np.random.Generator, draws: int | None = None):
    """Standard-normal ordinary coordinates."""
    size = (spec.coordinate_count,) if draws is None else (spec.coordinate_count, draws)
    return rng.standard_normal(size)


def _unpack(spec: WishartSpec, sample):
    """Split the flat coordinate vector into the named numbers."""
    sample = np.asarray(sample)
    if sample.shape[0] != spec.coordinate_count:
        raise ShapeError(f"sample has {sample.shape[0]} coordinates, expected {spec.coordinate_count}")
    a, b, c, d = spec.a, spec.b, spec.c, spec.d
    pos = 0

    def take(k):
        nonlocal pos
        out = sample[pos : pos + k]
        pos += k
        return out

    def cplx(k):
        re, im = take(k), take(k)
        return re + 1j * im

    if spec.beta == 1:
        x = take(a * c)
        zt1, zt2 = cplx(b * d), cplx(b * d)
        return {"x": x, "zt1": zt1, "zt2": zt2}
    if spec.beta == 2:
        return {"z": cplx(a * c), "zt": cplx(b * d)}
    z1, z2 = cplx(a * c), cplx(a * c)
    return {"z1": z1, "z2": z2, "y": take(b * d)}


def _scalar(n, v):
    return GrassmannElement.scalar(n, v)


def build_V_dagger(spec: WishartSpec, sample) -> SuperMatrix:
    """V^dagger: one row per column supervector of V."""
    vals = _unpack(spec, sample)
    a, b, c, d, n = spec.a, spec.b, spec.c, spec.d, spec.generator_count
    g1, g2 = spec.gamma1, spec.gamma2
    shape = SuperShape(g2 * a, g1 * b, g2 * c, g1 * d)
    zero = GrassmannElement.zero(n)
    grid = [[zero] * shape.cols for _ in range(shape.rows)]

    def gen(i, conj=False):
        return GrassmannElement.generator(n, i + (1 if conj else 0))

    if spec.beta == 2:
        for j in range(a):
            for k in range(c):
                grid[j][k] = _scalar(n, vals["z"][j * c + k])
            for k in range(d):
                grid[j][c + k] = gen(chi_index(spec, j, k))
        for j in range(b):
            for k in range(c):
                grid[a + j][k] = gen(zeta_index(spec, j, k))
            for k in range(d):
                grid[a + j][c + k] = _scalar(n, vals["zt"][j * d + k])
    elif spec.beta == 1:
        for j in range(a):
            for k in range(c):
                grid[j][k] = _scalar(n, vals["x"][j * c + k])
            for k in range(d):
                grid[j][c + k] = gen(chi_index(spec, j, k))
                grid[j][c + d + k] = gen(chi_index(spec, j, k), True)
        for j in range(b):
            for k in range(c):
                grid[a + j][k] = gen(zeta_index(spec, j, k))
                grid[a + b + j][k] = gen(zeta_index(spec, j, k), True)
            for k in range(d):
                z1, z2 = vals["zt1"][j * d + k], vals["zt2"][j * d + k]
                grid[a + j][c + k] = _scalar(n, z1)
                grid[a + j][c + d + k] = _scalar(n, -np.conj(z2))
                grid[a + b + j][c + k] = _scalar(n, z2)
                grid[a + b + j][c + d + k] = _scalar(n, np.conj(z1))
    else:
        for j in range(a):
            for k in range(c):
                z1, z2 = vals["z1"][j * c + k], vals["z2"][j * c + k]
                grid[j][k] = _scalar(n, z1)
                grid[j][c + k] = _scalar(n, -np.conj(z2))
                grid[a + j][k] = _scalar(n, z2)
                grid[a + j][c + k] = _scalar(n, np.conj(z1))
            for k in range(d):
                grid[j][2 * c + k] = gen(chi_index(spec, j, k))
                grid[a + j][2 * c + k] = gen(chi_index(spec, j, k), True)
        for j in range(b):
            for k in range(c):
                grid[2 * a + j][k] = gen(zeta_index(spec, j, k))
                grid[2 * a + j][c + k] = gen(zeta_index(spec, j, k), True)
            for k in range(d):
                grid[2 * a + j][2 * c + k] = _scalar(n, vals["y"][j * d + k])
    return SuperMatrix(shape, grid, n)


def build_V(spec: WishartSpec, sample) -> SuperMatrix:
    """The (g2 c + g1 d) x (g2 a + g1 b) rectangular supermatrix."""
    return adjoint(build_V_dagger(spec, sample))


def build_B(spec: WishartSpec, V: SuperMatrix) -> SuperMatrix:
    return (V * adjoint(V)) * (1.0 / spec.gamma_tilde)


def build_K(spec: WishartSpec, V: SuperMatrix) -> SuperMatrix:
    return (adjoint(V) * V) * (1.0 / spec.gamma_tilde)


def reality_check(spec: WishartSpec, V: SuperMatrix, tol: float = 0.0) -> bool:
    """V^* == Y_cd V Y_ab^T (entrywise, exact by default).

    For beta = 2 both Y matrices are identities and complex V carries no
    reality constraint, so the relation is checked in the conjugated form
    V^* == Y V^* Y^T, which holds trivially.
    """
    s = V.shape
    y_rows = hat_y(spec.beta, s.boson_rows, s.fermion_rows, V.n)
    y_cols = hat_y(spec.beta, s.boson_cols, s.fermion_cols, V.n)
    lhs = sm_conjugate(V)
    rhs = y_rows * (lhs if spec.beta == 2 else V) * transpose_plain(y_cols)
    return (lhs - rhs).max_abs() <= tol


def _trace(M: SuperMatrix) -> GrassmannElement:
    out = GrassmannElement.zero(M.n)
    for i in range(M.shape.rows):
        out = out + M.entries[i][i]
    return out


def _coeff_dev(x: GrassmannElement, y: GrassmannElement):
    """(max deviation, max magnitude) across every coefficient and draw."""
    return (x - y).max_abs(), max(x.max_abs(), y.max_abs())


def duality_check(spec: WishartSpec, V: SuperMatrix, m_max: int, tol: float = 1e-12, seed=None) -> VerificationReport:
    """Str K^m against Str B^m for m = 1..m_max, coefficient by coefficient.

    For b = 0 the Boson-Boson block of K is all of K, so Str K^m is tr K^m.
    """
    if m_max < 1:
        raise SpecError("m_max must be at least 1")
    B, K = build_B(spec, V), build_K(spec, V)
    worst = (0.0, 0.0, 0, None, None)
    Bm, Km = B, K
    for m in range(1, m_max + 1):
        if m > 1:
            Bm, Km = Bm * B, Km * K
        sb, sk = supertrace(Bm), supertrace(Km)
        dev, scale = _coeff_dev(sk, sb)
        rel = dev / scale if scale else 0.0
        if worst[3] is None or rel > worst[1]:
            worst = (dev, rel, m, sk, sb)
    dev, rel, m, sk, sb = worst
    lhs, rhs = _leading(sk), _leading(sb)
    return VerificationReport.compare(
        "duality",
        lhs,
        rhs,
        tol,
        spec=spec,
        seed=seed,
        abs_error=dev,
        rel_error=rel,
        mode="rel",
        label=f"m<={m_max}",
        details={"worst_m": m},
    )


def _leading(x: GrassmannElement):
    """A representative scalar: the body of the first draw."""
    v = x.terms.get(0, 0)
    v = np.asarray(v).ravel()
    return complex(v[0]) if v.size else 0j


def _columns(V: SuperMatrix, boson: bool) -> SuperMatrix:
    s = V.shape
    if boson:
        cols = range(s.boson_cols)
        shape = SuperShape(s.boson_rows, s.fermion_rows, s.boson_cols, 0)
    else:
        cols = range(s.boson_cols, s.cols)
        shape = SuperShape(s.boson_rows, s.fermion_rows, 0, s.fermion_cols)
    return SuperMatrix(shape, [[r[j] for j in cols] for r in V.entries], V.n)


def split_B(spec: WishartSpec, V: SuperMatrix):
    """(B1, B2) with B = B1 + S(B2); B1 from the Boson columns, B2 from the
    S-images of the Fermion columns."""
    g = 1.0 / spec.gamma_tilde
    vb, vf = _columns(V, True), _columns(V, False)
    B1 = (vb * adjoint(vb)) * g
    svf = s_operator(vf)
    B2 = (svf * adjoint(svf)) * g
    return B1, B2


def invariance_check(
    spec: WishartSpec, V: SuperMatrix, U: SuperMatrix, m_max: int = 3, tol: float = 1e-12
) -> VerificationReport:
    """Str((V U^dag)(U V^dag))^m against Str(V V^dag)^m."""
    if U.shape != SuperShape(V.shape.boson_cols, V.shape.fermion_cols, V.shape.boson_cols, V.shape.fermion_cols):
        raise ShapeError(f"U of shape {U.shape} does not act on the columns of V")
    if not is_body_unitary(U):
        raise SpecError("U is not body-unitary")
    g = 1.0 / spec.gamma_tilde
    B = (V * adjoint(V)) * g
    W = V * adjoint(U)
    Bu = (W * adjoint(W)) * g
    reps = []
    P, Pu = B, Bu
    worst_dev, worst_rel, lhs, rhs = 0.0, 0.0, 0j, 0j
    for m in range(1, m_max + 1):
        if m > 1:
            P, Pu = P * B, Pu * Bu
        x, y = supertrace(Pu), supertrace(P)
        dev, scale = _coeff_dev(x, y)
        rel = dev / scale if scale else 0.0
        if rel >= worst_rel:
            worst_dev, worst_rel, lhs, rhs = dev, rel, _leading(x), _leading(y)
        reps.append(rel)
    return VerificationReport.compare(
        "invariance", lhs, rhs, tol, spec=spec, abs_error=worst_dev, rel_error=worst_rel, mode="rel"
    )


def diagonal_phase_unitary(spec: WishartSpec, phases, n: int) -> SuperMatrix:
    """Body-only diagonal unitary acting on the columns of V."""
    s = spec.v_shape
    vals = np.exp(1j * np.asarray(phases, dtype=float))
    if vals.size != s.cols:
        raise ShapeError(f"need {s.cols} phases")
    return SuperMatrix.diag(list(vals[: s.boson_cols]), list(vals[s.boson_cols:]), n)


def permutation_unitary(spec: WishartSpec, perm_boson, perm_fermion, n: int) -> SuperMatrix:
    s = spec.v_shape
    M = np.zeros((s.cols, s.cols))
    for i, p in enumerate(perm_boson):
        M[i, p] = 1
    for i, p in enumerate(perm_fermion):
        M[s.boson_cols + i, s.boson_cols + p] = 1
    return SuperMatrix.from_array(SuperShape(s.boson_cols, s.fermion_cols, s.boson_cols, s.fermion_cols), M, n)


__all__ = [
    "SpecError",
    "WishartSpec",
    "build_B",
    "build_K",
    "build_V",
    "build_V_dagger",
    "chi_index",
    "diagonal_phase_unitary",
    "duality_check",
    "hat_y",
    "invariance_check",
    "kappa",
    "permutation_unitary",
    "random_sample",
    "reality_check",
    "split_B",
    "zeta_index",
]
