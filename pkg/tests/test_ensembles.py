from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superwishart.ensembles import (
    SpecError,
    WishartSpec,
    build_B,
    build_V,
    diagonal_phase_unitary,
    duality_check,
    invariance_check,
    kappa,
    permutation_unitary,
    random_sample,
    reality_check,
    split_B,
)
from superwishart.supermatrix import adjoint, s_operator, supertrace

specs = st.builds(
    WishartSpec,
    st.sampled_from([1, 2, 4]),
    st.integers(1, 2),
    st.integers(0, 2),
    st.integers(1, 2),
    st.integers(0, 2),
)


def sample_V(spec, seed, draws=5):
    rng = np.random.default_rng(seed)
    return build_V(spec, random_sample(spec, rng, draws))


@pytest.mark.parametrize(
    "args",
    [(3, 1, 0, 1, 1), (2, -1, 0, 1, 1), (2, 1.5, 0, 1, 1)],
)
def test_invalid_spec(args):
    with pytest.raises(SpecError):
        WishartSpec(*args)


def test_gammas_and_counts():
    s = WishartSpec(4, 2, 1, 1, 1)
    assert (s.gamma1, s.gamma2, s.gamma_tilde) == (1, 2, 2)
    assert s.generator_count == 2 * (2 * 1 + 1 * 1)
    assert s.coordinate_count == 4 * 2 * 1 + 1 * 1 * 1
    s1 = WishartSpec(1, 2, 0, 1, 1)
    assert (s1.gamma1, s1.gamma2) == (2, 1)


def test_kappa_variants():
    s = WishartSpec(2, 3, 0, 1, 2)
    assert kappa(s) == 3 - 1 + 1 + 2 - 1
    assert kappa(WishartSpec(1, 2, 0, 1, 1)) == Fraction(2, 2) + 0
    assert kappa(WishartSpec(4, 2, 1, 1, 1), "thm4") == 2 - Fraction(1, 2)
    with pytest.raises(SpecError):
        kappa(s, "nope")


def test_v_shape():
    s = WishartSpec(4, 3, 2, 1, 1)
    sh = s.v_shape
    assert (sh.boson_rows, sh.fermion_rows, sh.boson_cols, sh.fermion_cols) == (2, 1, 6, 2)


@given(specs, st.integers(0, 10_000))
def test_duality(spec, seed):
    rep = duality_check(spec, sample_V(spec, seed), m_max=3)
    assert rep.passed, rep.line()


@given(specs, st.integers(0, 10_000))
def test_reality_condition(spec, seed):
    assert reality_check(spec, sample_V(spec, seed), tol=1e-12)


@given(specs, st.integers(0, 10_000))
def test_split_reconstructs_B(spec, seed):
    V = sample_V(spec, seed)
    B1, B2 = split_B(spec, V)
    assert (build_B(spec, V) - (B1 + s_operator(B2))).max_abs() <= 1e-12


@given(specs, st.integers(0, 10_000))
def test_B_is_self_adjoint(spec, seed):
    B = build_B(spec, sample_V(spec, seed))
    assert (B - adjoint(B)).max_abs() <= 1e-12


@given(specs, st.integers(0, 10_000), st.data())
def test_invariance_under_column_rotations(spec, seed, data):
    V = sample_V(spec, seed, draws=3)
    sh = spec.v_shape
    phases = data.draw(st.lists(st.floats(-3, 3), min_size=sh.cols, max_size=sh.cols))
    U = diagonal_phase_unitary(spec, phases, V.n)
    assert invariance_check(spec, V, U).passed
    pb = data.draw(st.permutations(range(sh.boson_cols)))
    pf = data.draw(st.permutations(range(sh.fermion_cols)))
    assert invariance_check(spec, V, permutation_unitary(spec, pb, pf, V.n)).passed


def test_supertrace_body_is_a_positive_quadratic_form():
    spec = WishartSpec(2, 2, 0, 1, 1)
    rng = np.random.default_rng(3)
    x = random_sample(spec, rng)
    V = build_V(spec, x)
    b = supertrace(build_B(spec, V)).terms[0]
    assert np.isclose(complex(b), np.sum(x**2))
