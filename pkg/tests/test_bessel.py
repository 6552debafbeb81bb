import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superwishart.ensembles import SpecError
from superwishart.identities.bessel import (
    beta_law_nodes,
    bessel_phi,
    bessel_phi_monte_carlo,
    eigenvalue,
    haar_sample_modulus,
)
from superwishart.identities.checks import bessel_eigen_check

reals = st.floats(-3, 3)


@given(st.sampled_from([1, 2, 4]), reals, reals, reals, reals)
def test_bessel_is_bounded(bt, r1, r2, s1, s2):
    assert abs(bessel_phi(2, bt, (r1, r2), (s1, s2))) <= 1 + 1e-12


@pytest.mark.parametrize("bt", [1, 2, 4])
def test_bessel_at_the_origin(bt):
    assert bessel_phi(2, bt, (0.0, 0.0), (1.3, -0.4)) == pytest.approx(1.0)


def test_closed_form_matches_group_quadrature():
    r, s = (0.7, -1.1), (1.9, 0.3)
    closed = bessel_phi(2, 2, r, s)
    # the same average taken over the Beta law of |U_11|^2
    from superwishart.identities.bessel import _rows, gamma1_of

    t, w = beta_law_nodes(2, 48)
    A = _rows(np.array(s), t)
    quad = np.sum(w * np.exp(1j * gamma1_of(2) * (r[0] * A[0] + r[1] * A[1])))
    assert closed == pytest.approx(quad, abs=1e-13)


@pytest.mark.parametrize("bt", [1, 2, 4])
def test_beta_law_moments(bt):
    t, w = beta_law_nodes(bt, 32)
    assert np.sum(w) == pytest.approx(1.0)
    assert np.sum(w * t) == pytest.approx(0.5)
    assert np.sum(w * (t - 0.5) ** 2) == pytest.approx(1 / (4 * (bt + 1)))


@pytest.mark.parametrize("bt", [1, 2, 4])
def test_haar_modulus_has_the_beta_law(bt):
    rng = np.random.default_rng(1)
    t = haar_sample_modulus(bt, 200_000, rng)
    se = np.sqrt(1 / (4 * (bt + 1)) / t.size)
    assert abs(t.mean() - 0.5) < 6 * se
    assert abs(t.var() - 1 / (4 * (bt + 1))) < 0.01


@pytest.mark.parametrize("bt", [1, 4])
def test_monte_carlo_group_average(bt):
    rng = np.random.default_rng(2)
    r, s = (0.4, -0.9), (1.2, 0.5)
    mc = bessel_phi_monte_carlo(bt, r, s, 200_000, rng)
    assert abs(mc - bessel_phi(2, bt, r, s)) < 0.01


def test_d3_is_out_of_scope():
    with pytest.raises(SpecError):
        bessel_phi(3, 2, (0, 0, 0), (1, 2, 3))


@given(st.sampled_from([1, 2, 4]), st.integers(1, 2), st.integers(0, 1000))
def test_eigen_equation(bt, d, seed):
    rng = np.random.default_rng(seed)
    r, s = rng.uniform(-2, 2, d), rng.uniform(-2, 2, d)
    rep = bessel_eigen_check(d, bt, r, s)
    assert rep.passed, rep.line()


def test_eigenvalue():
    assert eigenvalue(2, 4, (1.0, 2.0)) == pytest.approx((2j) ** 2 * 2.0)
