import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superwishart.ensembles import SpecError, WishartSpec
from superwishart.integrator import (
    DivergenceError,
    QuadratureSpec,
    Superfunction,
    corollary2_check,
    gaussian_vector_closed_form,
    gaussian_vector_integral,
    lhs_integral,
)


def test_named_superfunctions():
    assert Superfunction.named("one").degree == 0
    assert Superfunction.named("str2").degree == 2
    assert Superfunction.named("str").is_str_only()
    assert Superfunction.named("str2").str_polynomial() == {2: 1}
    with pytest.raises(ValueError):
        Superfunction.named("nope")


def test_superfunction_arithmetic():
    F = Superfunction.named("one") + Superfunction.named("str").scaled(2)
    assert F.degree == 1
    assert F.str_polynomial() == {0: 1, 1: 2}


@pytest.mark.parametrize("beta,a,eps", [(2, 1, 1.0), (2, 2, 0.5), (1, 1, 1.0), (4, 1, 2.0), (1, 3, 1.5)])
def test_bosonic_gaussian(beta, a, eps):
    # for d = 0 the integrand is an ordinary Gaussian in the vector components
    spec = WishartSpec(beta, a, 0, 1, 0)
    got = lhs_integral(spec, Superfunction.named("one"), QuadratureSpec(epsilon=eps)).value
    g2 = spec.gamma2
    ref = gaussian_vector_closed_form(spec, 1j * eps * np.eye(g2))
    assert got == pytest.approx(ref, rel=1e-12)


def test_pure_fermionic_closed_value():
    # one fermionic column, d = 1: the integral is (-2 pi)^{-1} up to e^{0}
    spec = WishartSpec(2, 1, 0, 0, 1)
    got = lhs_integral(spec, Superfunction.named("one"), QuadratureSpec(epsilon=1.0)).value
    assert got == pytest.approx(-1 / (2 * math.pi), rel=1e-12)


def test_error_estimate_is_small_for_polynomial_integrands():
    spec = WishartSpec(2, 2, 0, 1, 1)
    res = lhs_integral(spec, Superfunction.named("str2"), QuadratureSpec())
    assert res.error < 1e-10
    assert res.method.startswith("gauss_hermite")


def test_monte_carlo_agrees_with_tensor_rule():
    spec = WishartSpec(2, 1, 0, 1, 1)
    F = Superfunction.named("str2")
    gh = lhs_integral(spec, F, QuadratureSpec()).value
    mc = lhs_integral(spec, F, QuadratureSpec(scheme="monte_carlo", mc_samples=200_000, seed=5))
    assert abs(mc.value - gh) < 6 * mc.error + 1e-12


def test_monte_carlo_is_seeded():
    spec = WishartSpec(2, 1, 0, 1, 1)
    q = QuadratureSpec(scheme="monte_carlo", mc_samples=5_000, seed=11)
    F = Superfunction.named("str")
    assert lhs_integral(spec, F, q).value == lhs_integral(spec, F, q).value


def test_divergence_without_damping():
    spec = WishartSpec(2, 1, 0, 1, 1)
    with pytest.raises(DivergenceError):
        lhs_integral(spec, Superfunction.named("one"), QuadratureSpec(epsilon=0.0))


def test_wick_rotation_needs_fermionic_damping():
    # with b > 0 and no rotation the Fermion-Fermion bosons grow
    spec = WishartSpec(2, 1, 1, 1, 1)
    with pytest.raises(DivergenceError):
        lhs_integral(spec, Superfunction.named("one"), QuadratureSpec(epsilon=1.0))


@given(st.integers(0, 1000), st.sampled_from([1, 2]), st.sampled_from([1, 2]))
def test_gaussian_vector_integral(seed, a, c):
    spec = WishartSpec(2, a, 0, c, 0)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((c, c)) + 1j * rng.standard_normal((c, c))
    sigma = (X + X.conj().T) / 2 + 1j * (c + 1.0) * np.eye(c)
    num = gaussian_vector_integral(spec, sigma, nodes=32).value
    assert num == pytest.approx(gaussian_vector_closed_form(spec, sigma), rel=1e-8)


def test_gaussian_vector_needs_d0():
    with pytest.raises(SpecError):
        gaussian_vector_integral(WishartSpec(2, 1, 0, 1, 1), 1j * np.eye(1))


@pytest.mark.parametrize("a", [1, 2])
def test_corollary(a):
    rep = corollary2_check(WishartSpec(2, a, 1, 1, 0), Superfunction.named("exp"), QuadratureSpec(epsilon=1.0))
    assert rep.passed, rep.line()
