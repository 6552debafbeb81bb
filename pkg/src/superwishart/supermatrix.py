"""Block supermatrices over the Grassmann algebra.

A :class:`SuperMatrix` stores a dense grid of :class:`GrassmannElement`
entries.  Rows ``[0, boson_rows)`` and columns ``[0, boson_cols)`` form the
Boson block, the remaining ones the Fermion block.  Quaternionic matrices use
the complex 2x2 representation in the grouped layout ``Y_s (x) 1_q``.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import exact
from .grassmann import (
    GrassmannElement,
    GrassmannError,
    Parity,
    body,
    ga_conjugate,
    ga_inv_even,
    parity,
)

MEMBERSHIP_TOL = 1e-12


class ShapeError(ValueError):
    """Non-conformable or non-square supermatrix shapes."""


class SingularityError(ArithmeticError):
    """A block whose body is not invertible."""


@dataclass(frozen=True)
class SuperShape:
    boson_rows: int
    fermion_rows: int
    boson_cols: int
    fermion_cols: int

    def __post_init__(self):
        if min(self.boson_rows, self.fermion_rows, self.boson_cols, self.fermion_cols) < 0:
            raise ShapeError(f"negative block size in {self}")

    @property
    def rows(self):
        return self.boson_rows + self.fermion_rows

    @property
    def cols(self):
        return self.boson_cols + self.fermion_cols

    @property
    def is_square(self):
        return self.boson_rows == self.boson_cols and self.fermion_rows == self.fermion_cols

    def transposed(self):
        return SuperShape(self.boson_cols, self.fermion_cols, self.boson_rows, self.fermion_rows)


def _lift(n, x):
    return x if isinstance(x, GrassmannElement) else GrassmannElement.scalar(n, x)


class SuperMatrix:
    """Immutable supermatrix; ``entries[i][j]`` are GrassmannElements."""

    __slots__ = ("shape", "entries", "n")
    __array_ufunc__ = None

    def __init__(self, shape: SuperShape, entries, n: int):
        rows = [tuple(_lift(n, x) for x in row) for row in entries]
        if len(rows) != shape.rows or any(len(r) != shape.cols for r in rows):
            raise ShapeError(f"entry grid does not match {shape}")
        for r in rows:
            for x in r:
                if x.n != n:
                    raise GrassmannError("entries live in different algebras")
        self.shape = shape
        self.entries = tuple(rows)
        self.n = n

    # constructors
    @classmethod
    def zeros(cls, shape: SuperShape, n: int):
        z = GrassmannElement.zero(n)
        return cls(shape, [[z] * shape.cols for _ in range(shape.rows)], n)

    @classmethod
    def identity(cls, m1: int, m2: int, n: int):
        return cls.diag([1] * m1, [1] * m2, n)

    @classmethod
    def diag(cls, boson, fermion, n: int):
        vals = list(boson) + list(fermion)
        k = len(vals)
        z = GrassmannElement.zero(n)
        grid = [[_lift(n, vals[i]) if i == j else z for j in range(k)] for i in range(k)]
        return cls(SuperShape(len(boson), len(fermion), len(boson), len(fermion)), grid, n)

    @classmethod
    def from_blocks(cls, A, B, C, D, n: int):
        """Assemble from four nested lists; empty blocks may be ``[]``."""
        m1 = len(A) if A else len(B)
        m2 = len(C) if C else len(D)
        n1 = len(A[0]) if A and A[0] else (len(C[0]) if C and C[0] else 0)
        n2 = len(B[0]) if B and B[0] else (len(D[0]) if D and D[0] else 0)
        A = A or [[] for _ in range(m1)]
        B = B or [[] for _ in range(m1)]
        C = C or [[] for _ in range(m2)]
        D = D or [[] for _ in range(m2)]
        grid = [list(A[i]) + list(B[i]) for i in range(m1)]
        grid += [list(C[i]) + list(D[i]) for i in range(m2)]
        return cls(SuperShape(m1, m2, n1, n2), grid, n)

    @classmethod
    def from_array(cls, shape: SuperShape, values, n: int):
        """Ordinary numeric matrix as a body-only supermatrix."""
        values = np.asarray(values)
        return cls(shape, [[complex(v) for v in row] for row in values], n)

    # access
    def blocks(self):
        s = self.shape
        e = self.entries
        A = [list(r[: s.boson_cols]) for r in e[: s.boson_rows]]
        B = [list(r[s.boson_cols:]) for r in e[: s.boson_rows]]
        C = [list(r[: s.boson_cols]) for r in e[s.boson_rows:]]
        D = [list(r[s.boson_cols:]) for r in e[s.boson_rows:]]
        return A, B, C, D

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def map(self, f):
        return SuperMatrix(self.shape, [[f(x) for x in r] for r in self.entries], self.n)

    def body_matrix(self):
        """Body of every entry as a complex ndarray (scalar bodies only)."""
        return np.array([[complex(body(x)) for x in r] for r in self.entries], dtype=complex).reshape(
            self.shape.rows, self.shape.cols
        )

    # arithmetic
    def __add__(self, other):
        return sm_add(self, other)

    def __sub__(self, other):
        return sm_add(self, sm_scale(other, -1))

    def __neg__(self):
        return sm_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, SuperMatrix):
            return sm_mul(self, other)
        return sm_scale(self, other)

    def __rmul__(self, other):
        return sm_scale(self, other)

    __matmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix) or other.shape != self.shape:
            return False
        return all(x == y for rx, ry in zip(self.entries, other.entries) for x, y in zip(rx, ry))

    __hash__ = None

    def __repr__(self):
        return f"SuperMatrix({self.shape}, n={self.n})"

    def max_abs(self):
        return max((x.max_abs() for r in self.entries for x in r), default=0.0)

    def check_grading(self):
        """Raise unless diagonal blocks are even and off-diagonal blocks odd."""
        s = self.shape
        for i, r in enumerate(self.entries):
            for j, x in enumerate(r):
                off = (i >= s.boson_rows) != (j >= s.boson_cols)
                p = parity(x)
                if not x.terms:
                    continue
                if p is not (Parity.ODD if off else Parity.EVEN):
                    raise GrassmannError(f"entry ({i},{j}) has parity {p.value}")
        return True


def sm_add(A: SuperMatrix, B: SuperMatrix) -> SuperMatrix:
    if A.shape != B.shape:
        raise ShapeError(f"cannot add {A.shape} and {B.shape}")
    return SuperMatrix(A.shape, [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A.entries, B.entries)], A.n)


def sm_scale(A: SuperMatrix, c) -> SuperMatrix:
    return SuperMatrix(A.shape, [[x * c for x in r] for r in A.entries], A.n)


def sm_mul(A: SuperMatrix, B: SuperMatrix) -> SuperMatrix:
    sa, sb = A.shape, B.shape
    if sa.boson_cols != sb.boson_rows or sa.fermion_cols != sb.fermion_rows:
        raise ShapeError(f"cannot multiply {sa} by {sb}")
    zero = GrassmannElement.zero(A.n)
    Bt = list(zip(*B.entries)) if B.entries else [()] * sb.cols
    grid = []
    for ra in A.entries:
        row = []
        for cb in Bt:
            acc = zero
            for x, y in zip(ra, cb):
                if x.terms and y.terms:
                    acc = acc + x * y
            row.append(acc)
        grid.append(row)
    if not Bt:
        grid = [[] for _ in A.entries]
    return SuperMatrix(SuperShape(sa.boson_rows, sa.fermion_rows, sb.boson_cols, sb.fermion_cols), grid, A.n)


def _require_square(A, what):
    if not A.shape.is_square:
        raise ShapeError(f"{what} needs a square supermatrix, got {A.shape}")


def supertrace(A: SuperMatrix) -> GrassmannElement:
    _require_square(A, "Str")
    out = GrassmannElement.zero(A.n)
    m1 = A.shape.boson_rows
    for i in range(A.shape.rows):
        out = out + A.entries[i][i] if i < m1 else out - A.entries[i][i]
    return out


# even (commuting-entry) square matrices


def even_det(M, n: int) -> GrassmannElement:
    """Determinant of a square grid of even elements."""
    k = len(M)
    if k == 0:
        return GrassmannElement.one(n)
    if k <= 5:
        out = GrassmannElement.zero(n)
        for perm in itertools.permutations(range(k)):
            term = M[0][perm[0]]
            for i in range(1, k):
                if not term.terms:
                    break
                term = term * M[i][perm[i]]
            if term.terms:
                out = out + term if _perm_sign(perm) > 0 else out - term
        return out
    # elimination with pivots chosen by body size
    rows = [list(r) for r in M]
    det = GrassmannElement.one(n)
    for col in range(k):
        piv = max(range(col, k), key=lambda r: exact.magnitude(body(rows[r][col])))
        if exact.magnitude(body(rows[piv][col])) == 0:
            return GrassmannElement.zero(n)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        p = rows[col][col]
        det = det * p
        pinv = ga_inv_even(p)
        for r in range(col + 1, k):
            f = rows[r][col] * pinv
            if f.terms:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def _perm_sign(perm):
    s = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, L = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            L += 1
        if L % 2 == 0:
            s = -s
    return s


def even_inverse(M, n: int):
    """Gauss-Jordan inverse of a square grid of even elements."""
    k = len(M)
    one, zero = GrassmannElement.one(n), GrassmannElement.zero(n)
    rows = [list(M[i]) + [one if j == i else zero for j in range(k)] for i in range(k)]
    for col in range(k):
        piv = max(range(col, k), key=lambda r: exact.magnitude(body(rows[r][col])))
        if exact.magnitude(body(rows[piv][col])) == 0:
            raise SingularityError("even block has singular body")
        rows[col], rows[piv] = rows[piv], rows[col]
        pinv = ga_inv_even(rows[col][col])
        rows[col] = [x * pinv for x in rows[col]]
        for r in range(k):
            if r == col:
                continue
            f = rows[r][col]
            if f.terms:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [r[k:] for r in rows]


def _grid_mul(X, Y, n):
    zero = GrassmannElement.zero(n)
    if not X or not Y:
        cols = len(Y[0]) if Y else 0
        return [[zero] * cols for _ in X]
    out = []
    for rx in X:
        row = []
        for j in range(len(Y[0])):
            acc = zero
            for t, x in enumerate(rx):
                y = Y[t][j]
                if x.terms and y.terms:
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def _grid_sub(X, Y):
    return [[x - y for x, y in zip(rx, ry)] for rx, ry in zip(X, Y)]


def sdet(A: SuperMatrix) -> GrassmannElement:
    """det(A - B D^-1 C) / det D (Fermion-Fermion Schur complement)."""
    _require_square(A, "Sdet")
    a, b, c, d = A.blocks()
    try:
        dinv = even_inverse(d, A.n)
    except SingularityError as exc:
        raise SingularityError("Fermion-Fermion block body is singular") from exc
    schur = _grid_sub(a, _grid_mul(_grid_mul(b, dinv, A.n), c, A.n)) if a and d else a
    return even_det(schur, A.n) * ga_inv_even(even_det(d, A.n))


def sdet_bb(A: SuperMatrix) -> GrassmannElement:
    """det A / det(D - C A^-1 B) (Boson-Boson Schur complement)."""
    _require_square(A, "Sdet")
    a, b, c, d = A.blocks()
    ainv = even_inverse(a, A.n)
    schur = _grid_sub(d, _grid_mul(_grid_mul(c, ainv, A.n), b, A.n)) if a and d else d
    return even_det(a, A.n) * ga_inv_even(even_det(schur, A.n))


def sm_inverse(A: SuperMatrix) -> SuperMatrix:
    """Inverse from the body block inverse plus a terminating Neumann series."""
    _require_square(A, "inverse")
    s = A.shape
    n = A.n
    a, _, _, d = A.blocks()
    bodies = [[GrassmannElement.scalar(n, body(x)) for x in r] for r in a]
    bodied = [[GrassmannElement.scalar(n, body(x)) for x in r] for r in d]
    ia, idd = even_inverse(bodies, n), even_inverse(bodied, n)
    zero = GrassmannElement.zero(n)
    grid = [list(r) + [zero] * s.fermion_cols for r in ia]
    grid += [[zero] * s.boson_cols + list(r) for r in idd]
    A0inv = SuperMatrix(s, grid, n)
    # off-diagonal bodies vanish by grading, so the soul part N is nilpotent
    N = A - A.map(lambda x: GrassmannElement.scalar(n, body(x)))
    step = -(A0inv * N)
    term = SuperMatrix.identity(s.boson_rows, s.fermion_rows, n)
    total = term
    for _ in range(n + 1):
        term = term * step
        if not any(x.terms for r in term.entries for x in r):
            break
        total = total + term
    return total * A0inv


def supertranspose(A: SuperMatrix) -> SuperMatrix:
    """[[a, b], [c, d]] -> [[a^T, c^T], [-b^T, d^T]]."""
    a, b, c, d = A.blocks()
    T = lambda X, rows, cols: [[X[i][j] for i in range(rows)] for j in range(cols)]
    s = A.shape
    at = T(a, s.boson_rows, s.boson_cols)
    ct = T(c, s.fermion_rows, s.boson_cols)
    bt = [[-x for x in r] for r in T(b, s.boson_rows, s.fermion_cols)]
    dt = T(d, s.fermion_rows, s.fermion_cols)
    grid = [ra + rc for ra, rc in zip(at, ct)] + [rb + rd for rb, rd in zip(bt, dt)]
    return SuperMatrix(s.transposed(), grid, A.n)


def sm_conjugate(A: SuperMatrix) -> SuperMatrix:
    return A.map(ga_conjugate)


def adjoint(A: SuperMatrix) -> SuperMatrix:
    return sm_conjugate(supertranspose(A))


def s_operator(A: SuperMatrix) -> SuperMatrix:
    """[[s11, s12], [s21, s22]] -> [[-s22, -s21], [s12, s11]]."""
    a, b, c, d = A.blocks()
    s = A.shape
    neg = lambda X: [[-x for x in r] for r in X]
    grid = [rd + rc for rd, rc in zip(neg(d), neg(c))] + [rb + ra for rb, ra in zip(b, a)]
    new = SuperShape(s.fermion_rows, s.boson_rows, s.fermion_cols, s.boson_cols)
    return SuperMatrix(new, grid, A.n)


class Side(Enum):
    COLUMN = "column"
    ROW = "row"


@dataclass(frozen=True)
class WickRotation:
    """diag(1, e^{+-i angle/2}) on both sides; ``COLUMN`` uses +, ``ROW`` uses -."""

    angle: float
    side: Side = Side.COLUMN

    def phase(self):
        sgn = 1 if self.side is Side.COLUMN else -1
        return cmath.exp(0.5j * sgn * self.angle)


def wick_rotate(A: SuperMatrix, w: WickRotation) -> SuperMatrix:
    """P A P with P = diag(1, e^{+-i psi/2}); the Fermion-Fermion block picks up e^{+-i psi}."""
    if w.angle == 0:
        return A
    ph = w.phase()
    s = A.shape
    grid = []
    for i, r in enumerate(A.entries):
        fi = i >= s.boson_rows
        row = []
        for j, x in enumerate(r):
            k = fi + (j >= s.boson_cols)
            row.append(x if k == 0 else x * (ph ** k))
        grid.append(row)
    return SuperMatrix(s, grid, A.n)


# membership in the sets of supermatrices used by the integral theorems

Y_S = np.array([[0, 1], [-1, 0]])


def _close(x: GrassmannElement, y: GrassmannElement, tol=MEMBERSHIP_TOL):
    return (x - y).max_abs() <= tol


def _grid_close(X, Y, tol=MEMBERSHIP_TOL):
    if len(X) != len(Y):
        return False
    return all(len(rx) == len(ry) and all(_close(x, y, tol) for x, y in zip(rx, ry)) for rx, ry in zip(X, Y))


def _T(X):
    return [list(col) for col in zip(*X)] if X and X[0] else [[] for _ in range(len(X[0]) if X else 0)]


def _conj(X):
    return [[ga_conjugate(x) for x in r] for r in X]


def _neg(X):
    return [[-x for x in r] for r in X]


def _dag(X):
    return _T(_conj(X))


def _ys_conj(X, q, n):
    """(Y_s (x) 1_q) X^T (Y_s^T (x) 1_q) for a 2q x 2q grid."""
    Y = np.kron(Y_S, np.eye(q))
    Yg = [[GrassmannElement.scalar(n, float(v)) for v in r] for r in Y]
    YgT = [[GrassmannElement.scalar(n, float(v)) for v in r] for r in Y.T]
    return _grid_mul(_grid_mul(Yg, _T(X), n), YgT, n)


def _hermitian_posdef(X, tol=MEMBERSHIP_TOL):
    if not X:
        return True
    if not _grid_close(X, _dag(X)):
        return False
    try:
        b = np.array([[complex(body(x)) for x in r] for r in X])
    except TypeError:
        return False
    h = 0.5 * (b + b.conj().T)
    return bool(np.linalg.eigvalsh(h).min() > tol)


def _body_array(X):
    return np.array([[complex(body(x)) for x in r] for r in X], dtype=complex).reshape(len(X), len(X[0]) if X else 0)


def _in_sigma(A: SuperMatrix, beta: int) -> bool:
    s = A.shape
    if not s.is_square:
        return False
    a, b, c, d = A.blocks()
    n = A.n
    p1, q1 = s.boson_rows, s.fermion_rows
    if not _hermitian_posdef(a):
        return False
    if beta == 2:
        return _grid_close(c, _neg(_dag(b)))
    if beta == 1:
        if q1 % 2:
            return False
        q = q1 // 2
        eta = [r[:q] for r in b]
        if not _grid_close(a, _conj(a)):
            return False
        if not _grid_close([r[q:] for r in b], _conj(eta)):
            return False
        if not _grid_close(c, _neg(_dag(eta)) + _T(eta)):
            return False
        return _grid_close(d, _ys_conj(d, q, n))
    if beta == 4:
        if p1 % 2:
            return False
        p = p1 // 2
        s11 = [r[:p] for r in a[:p]]
        s12 = [r[p:] for r in a[:p]]
        if not _grid_close([r[:p] for r in a[p:]], _neg(_conj(s12))):
            return False
        if not _grid_close([r[p:] for r in a[p:]], _conj(s11)):
            return False
        eta = b[:p]
        if not _grid_close(b[p:], _conj(eta)):
            return False
        expect_c = [x + y for x, y in zip(_neg(_dag(eta)), _T(eta))]
        if not _grid_close(c, expect_c):
            return False
        return _grid_close(d, _T(d))
    raise ValueError(f"beta must be 1, 2 or 4, got {beta}")


def hat_y(beta, p_rows, q_rows, n):
    """The reality-structure matrix of the Boson/Fermion block sizes given."""
    if beta == 1:
        blk = [np.eye(p_rows), np.kron(Y_S, np.eye(q_rows // 2))]
    elif beta == 4:
        blk = [np.kron(Y_S, np.eye(p_rows // 2)), np.eye(q_rows)]
    else:
        blk = [np.eye(p_rows), np.eye(q_rows)]
    size = p_rows + q_rows
    M = np.zeros((size, size))
    M[:p_rows, :p_rows] = blk[0]
    M[p_rows:, p_rows:] = blk[1]
    return SuperMatrix.from_array(SuperShape(p_rows, q_rows, p_rows, q_rows), M, n)


def transpose_plain(A: SuperMatrix) -> SuperMatrix:
    """Ordinary transpose of the entry grid (used with the Y matrices)."""
    return SuperMatrix(A.shape.transposed(), _T([list(r) for r in A.entries]), A.n)


def sigma_membership(A: SuperMatrix, set_id: str, beta: int) -> bool:
    """Membership predicate for ``sigma``, ``sigma_dagger``, ``sigma_c`` and
    ``sigma_tilde_dagger`` at Dyson index ``beta``."""
    if set_id == "sigma_tilde_dagger":
        if not A.shape.is_square:
            return False
        if not _grid_close([list(r) for r in A.entries], [list(r) for r in adjoint(A).entries]):
            return False
        s = A.shape
        if beta == 1 and s.fermion_rows % 2 or beta == 4 and s.boson_rows % 2:
            return False
        Y = hat_y(beta, s.boson_rows, s.fermion_rows, A.n)
        conj_a = sm_conjugate(A)
        # for beta = 2 the stated condition compares A^* with itself
        rhs = Y * (conj_a if beta == 2 else A) * transpose_plain(Y)
        return _grid_close([list(r) for r in conj_a.entries], [list(r) for r in rhs.entries])
    if set_id not in {"sigma", "sigma_dagger", "sigma_c"}:
        raise ValueError(f"unknown set id {set_id!r}")
    try:
        if not _in_sigma(A, beta):
            return False
    except TypeError:
        return False
    d = A.blocks()[3]
    if set_id == "sigma_dagger":
        return _grid_close(d, _dag(d))
    if set_id == "sigma_c":
        if not d:
            return True
        try:
            u = _body_array(d)
        except TypeError:
            return False
        return bool(np.allclose(u.conj().T @ u, np.eye(len(d)), atol=MEMBERSHIP_TOL * 10, rtol=0))
    return True


def supermatrix_close(A: SuperMatrix, B: SuperMatrix, tol=0.0) -> bool:
    """Entrywise comparison; ``tol=0`` demands exact equality."""
    if A.shape != B.shape:
        return False
    if tol == 0:
        return A == B
    return (A - B).max_abs() <= tol


def is_body_unitary(U: SuperMatrix, tol=1e-12) -> bool:
    b = U.body_matrix()
    if b.shape[0] != b.shape[1]:
        return False
    return bool(np.allclose(b.conj().T @ b, np.eye(b.shape[0]), atol=tol, rtol=0))


__all__ = [
    "MEMBERSHIP_TOL",
    "ShapeError",
    "SingularityError",
    "Side",
    "SuperMatrix",
    "SuperShape",
    "WickRotation",
    "adjoint",
    "even_det",
    "even_inverse",
    "hat_y",
    "is_body_unitary",
    "s_operator",
    "sdet",
    "sdet_bb",
    "sigma_membership",
    "sm_add",
    "sm_conjugate",
    "sm_inverse",
    "sm_mul",
    "sm_scale",
    "supermatrix_close",
    "supertrace",
    "supertranspose",
    "transpose_plain",
    "wick_rotate",
]
