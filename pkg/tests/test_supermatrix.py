import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superwishart.grassmann import GrassmannElement
from superwishart.identities.checks import random_supermatrix
from superwishart.supermatrix import (
    ShapeError,
    SingularityError,
    SuperMatrix,
    SuperShape,
    WickRotation,
    adjoint,
    s_operator,
    sdet,
    sm_inverse,
    supertrace,
    supertranspose,
    wick_rotate,
)

N = 4
seeds = st.integers(0, 2**32 - 1)
sizes = st.tuples(st.integers(1, 2), st.integers(0, 2))


def square(seed, p, q, invertible=True):
    rng = np.random.default_rng(seed)
    return random_supermatrix(SuperShape(p, q, p, q), N, rng, invertible=invertible)


def one():
    return GrassmannElement.one(N)


def test_shape_validation():
    with pytest.raises(ShapeError):
        SuperShape(-1, 0, 0, 0)
    with pytest.raises(ShapeError):
        SuperMatrix(SuperShape(1, 0, 1, 0), [[1, 2]], 0)


def test_supertrace_and_sdet_of_diagonal():
    M = SuperMatrix.diag([2, 3], [5], 0)
    assert supertrace(M) == 0
    assert sdet(M) == GrassmannElement.scalar(0, Fraction(6, 5))


def test_sdet_rejects_singular_block():
    M = SuperMatrix.diag([1], [0], 0)
    with pytest.raises(SingularityError):
        sdet(M)


@given(seeds, sizes)
def test_grading_of_random_supermatrix(seed, pq):
    assert square(seed, *pq).check_grading()


@given(seeds, sizes)
def test_sdet_is_multiplicative(seed, pq):
    A = square(seed, *pq)
    B = square(seed + 1, *pq)
    assert sdet(A * B) == sdet(A) * sdet(B)


@given(seeds, sizes)
def test_supertrace_is_cyclic(seed, pq):
    A = square(seed, *pq, invertible=False)
    B = square(seed + 7, *pq, invertible=False)
    assert supertrace(A * B) == supertrace(B * A)


@given(seeds, sizes)
def test_inverse(seed, pq):
    A = square(seed, *pq)
    p, q = pq
    assert A * sm_inverse(A) == SuperMatrix.identity(p, q, N)


@given(seeds, sizes)
def test_sdet_of_inverse(seed, pq):
    A = square(seed, *pq)
    assert sdet(sm_inverse(A)) * sdet(A) == one()


@given(seeds, sizes)
def test_supertrace_of_supertranspose(seed, pq):
    A = square(seed, *pq, invertible=False)
    assert supertrace(supertranspose(A)) == supertrace(A)


@given(seeds, sizes)
def test_sdet_of_supertranspose(seed, pq):
    A = square(seed, *pq)
    assert sdet(supertranspose(A)) == sdet(A)


@given(seeds, sizes)
def test_adjoint_reverses_products(seed, pq):
    A = square(seed, *pq, invertible=False)
    B = square(seed + 3, *pq, invertible=False)
    assert adjoint(A * B) == adjoint(B) * adjoint(A)


@given(seeds, sizes)
def test_s_operator_is_a_quarter_turn(seed, pq):
    A = square(seed, *pq, invertible=False)
    assert s_operator(s_operator(A)) == -A
    # the blocks trade places with a sign, so Str S(A) is minus the plain trace
    plain = sum((A[i, i] for i in range(A.shape.rows)), GrassmannElement.zero(N))
    assert supertrace(s_operator(A)) == -plain


@given(seeds, st.tuples(st.integers(1, 2), st.integers(1, 2)))
def test_s_operator_inverts_sdet(seed, pq):
    A = square(seed, *pq)
    assert sdet(s_operator(A)) == (-1) ** pq[1] * (one() / sdet(A))


def test_wick_rotation_phases_fermion_block():
    M = SuperMatrix.diag([1.0], [2.0], 0)
    R = wick_rotate(M, WickRotation(math.pi / 3))
    assert complex(R[0, 0].terms[0]) == 1.0
    assert cmath.isclose(complex(R[1, 1].terms[0]), 2.0 * cmath.exp(1j * math.pi / 3))
