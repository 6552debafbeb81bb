import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superwishart.identities.quadrature import (
    abs_vandermonde,
    circle_average,
    circle_grid,
    laguerre_cone,
    radial_alpha,
    signed_vandermonde,
    signed_vandermonde_phase,
    sin_power_coefficients,
)


@pytest.mark.parametrize("k", [-3, 0, 1, 5])
def test_circle_average_of_fourier_modes(k):
    phis = circle_grid(1, 16)
    got = circle_average(np.exp(1j * k * phis[:, 0]), 1, 16)
    assert got == pytest.approx(1.0 if k == 0 else 0.0, abs=1e-14)


@pytest.mark.parametrize("p", [1.0, 2.0, 4.0, 0.5])
def test_sin_power_series(p):
    theta = np.linspace(0.1, 6.0, 7)
    c = sin_power_coefficients(p, 4000)
    k = np.arange(1, c.size)
    series = c[0] + 2 * np.sum(c[1:, None] * np.cos(np.outer(k, theta)), axis=0)
    tol = 1e-12 if p.is_integer() and p % 2 == 0 else 1e-3
    assert np.allclose(series, np.abs(np.sin(theta / 2)) ** p, atol=tol)


def test_repulsion_weight_average():
    # mean of |sin(x/2)| over the circle is 2/pi
    M = 64
    ones = np.ones(M * M)
    assert circle_average(ones, 2, M, 1.0) == pytest.approx(2 / math.pi, abs=1e-13)
    assert circle_average(ones, 2, M, 2.0) == pytest.approx(0.5, abs=1e-13)


def test_product_integration_handles_kinks():
    # E[cos(phi1 - phi2) |sin((phi1-phi2)/2)|] = -2/(3 pi)
    M = 32
    phis = circle_grid(2, M)
    vals = np.cos(phis[:, 0] - phis[:, 1])
    assert circle_average(vals, 2, M, 1.0) == pytest.approx(-2 / (3 * math.pi), abs=1e-13)


@given(st.lists(st.floats(0, 2 * math.pi - 1e-9), min_size=2, max_size=3), st.sampled_from([1.0, 2.0, 4.0]))
def test_signed_vandermonde_factorization(angles, p):
    phis = np.array([angles])
    mod = np.ones(1)
    for n in range(len(angles)):
        for m in range(n + 1, len(angles)):
            mod = mod * np.abs(np.sin((phis[:, n] - phis[:, m]) / 2)) ** p
    assert np.allclose(signed_vandermonde_phase(phis, p) * mod, signed_vandermonde(phis, p), atol=1e-12)


def test_radial_alpha():
    assert radial_alpha(2.5) == -0.5
    assert radial_alpha(3) == 0.0
    assert radial_alpha(0.25) == -0.75


@pytest.mark.parametrize("c,rate", [(1, 1.0), (2, 1.5), (3, 0.7)])
def test_laguerre_cone_volume(c, rate):
    lam, w = laguerre_cone(c, rate, 8)
    assert np.sum(w * np.exp(-rate * lam.sum(axis=1))) == pytest.approx(rate**-c, rel=1e-13)


def test_laguerre_cone_fractional_one_dim():
    lam, w = laguerre_cone(1, 2.0, 10, alpha=-0.5)
    got = np.sum(w * lam[:, 0] ** -0.5 * np.exp(-2.0 * lam[:, 0]))
    assert got == pytest.approx(math.sqrt(math.pi / 2), rel=1e-13)


def test_laguerre_cone_fractional_two_dim():
    lam, w = laguerre_cone(2, 1.0, 12, alpha=-0.5)
    x, y = lam[:, 0], lam[:, 1]
    h = (x * y) ** -0.5 * (x + y) ** 2 * np.exp(-(x + y))
    assert np.sum(w * h) == pytest.approx(2 * math.pi, rel=1e-12)


def test_laguerre_cone_rejects_growth():
    with pytest.raises(ValueError):
        laguerre_cone(1, 0.0, 4)


def test_abs_vandermonde():
    lam = np.array([[1.0, 3.0, 4.0]])
    assert abs_vandermonde(lam, 2)[0] == pytest.approx((2 * 3 * 1) ** 2)
