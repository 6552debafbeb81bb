import math

import pytest

from superwishart.ensembles import SpecError, WishartSpec
from superwishart.identities import checks
from superwishart.identities.rhs import rhs_superbosonization
from superwishart.identities.symmetric import SymmetricPolynomial
from superwishart.integrator import Superfunction
from superwishart.report import VerificationReport, combine


def test_report_pass_rules():
    assert VerificationReport.compare("x", 1.0, 1.1, 0.2).passed
    assert not VerificationReport.compare("x", 1.0, 2.0, 0.1).passed
    assert VerificationReport.compare("x", 100.0, 100.01, 1e-3, mode="rel").passed
    assert not VerificationReport.compare("x", 100.0, 100.01, 1e-3, mode="abs").passed
    # roundoff-level values on both sides agree in relative mode
    assert VerificationReport.compare("x", 3e-16, -2e-16, 1e-6, mode="rel").passed
    assert not VerificationReport.compare("x", float("nan"), 0.0, 1.0).passed


def test_combine_keeps_worst():
    good = VerificationReport.compare("x", 1.0, 1.0, 0.1, label="good")
    bad = VerificationReport.compare("x", 1.0, 3.0, 0.1, label="bad")
    out = combine("x", [good, bad])
    assert not out.passed
    assert out.label == "bad"
    assert out.details == {"parts": 2, "failed": 1}


def test_report_serialization_is_stable():
    rep = VerificationReport.compare("x", 1 + 2j, 1.0, 0.1, seed=3)
    d = rep.to_dict()
    assert d["lhs_value"] == [1.0, 2.0]
    assert list(d)[:2] == ["identity_id", "label"]
    assert d["runtime_ms"] == 0


@pytest.mark.parametrize("beta", [1, 2, 4])
@pytest.mark.parametrize("a,d", [(1, 1), (2, 1), (1, 2)])
def test_calibration(beta, a, d):
    rep = checks.calibration_check(WishartSpec(beta, a, 0, 0, d))
    assert rep.passed and rep.abs_error == 0.0


def test_calibration_needs_c0():
    with pytest.raises(SpecError):
        checks.calibration_check(WishartSpec(2, 1, 0, 1, 1))


def test_s_operator_and_split():
    assert checks.s_operator_check(draws=10, seed=4).passed
    assert checks.split_check(WishartSpec(4, 2, 1, 1, 1), draws=10, seed=4).passed


@pytest.mark.parametrize("rho", [0.5, 2.0])
def test_ingham_siegel_support(rho):
    assert checks.ingham_siegel_scalar(2, rho).passed
    assert abs(checks.ingham_siegel_scalar(2, -rho).lhs_value) < 1e-4


def test_circular_forms():
    for form in ("modulus", "signed"):
        assert checks.circular_selberg_check(2, 4, 3, form=form).passed
    with pytest.raises(ValueError):
        checks.circular_selberg_check(1, 2, 1, form="other")
    with pytest.raises(SpecError):
        checks.circular_selberg_check(3, 2, 1)


def test_circular_coarse_grid_fails_tight_tolerance():
    # the check must be able to fail: a 4-node grid cannot resolve d = 2
    assert not checks.circular_selberg_check(2, 2, 2, nodes=4).passed


def test_laguerre_selberg():
    assert checks.laguerre_selberg_check(3, 4, 2).passed


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_equivalence_identity_samples(beta):
    spec = WishartSpec(beta, 3, 0, 1, 2)
    for lam in [(0, 0), (2, 1), (3, 3), (4, 2)]:
        rep = checks.identity61_check(spec, SymmetricPolynomial.monomial(lam, 2))
        assert rep.passed, rep.line()


def test_equivalence_identity_detects_wrong_sides():
    lhs, rhs = checks.identity61_sides(WishartSpec(2, 2, 0, 1, 1), SymmetricPolynomial.monomial((1,), 1))
    assert lhs == rhs
    lhs2, _ = checks.identity61_sides(WishartSpec(2, 2, 0, 1, 1), SymmetricPolynomial.monomial((2,), 1))
    assert lhs2 != rhs


def test_constants_check():
    assert checks.constants_check(WishartSpec(4, 3, 0, 1, 2)).passed


def test_gaussian_vector_check():
    assert checks.gaussian_vector_check(WishartSpec(2, 2, 0, 2, 0), seed=9).passed


@pytest.mark.parametrize("name", ["one", "str", "str2"])
def test_dimension_changing_identity(name):
    rep = checks.theorem4_check(WishartSpec(2, 1, 0, 2, 1), 1, Superfunction.named(name))
    assert rep.passed, rep.line()


def test_dimension_changing_identity_small_enlarged_route():
    # the enlarged integral is cheap here: a single bosonic column
    rep = checks.theorem4_check(WishartSpec(2, 1, 0, 1, 0), 1, Superfunction.named("one"), enlarged=True)
    assert rep.passed, rep.line()
    assert "enlarged" in rep.details


@pytest.mark.parametrize(
    "args,e",
    [
        ((2, 1, 0, 1, 0), 1),
        ((2, 1, 0, 1, 0), 2),
        ((2, 1, 1, 1, 0), 0),
        ((2, 1, 0, 1, 1), 1),
        ((1, 1, 0, 1, 0), 1),
        ((1, 1, 1, 1, 0), 0),
        ((4, 1, 0, 1, 1), 1),
        ((4, 1, 0, 1, 0), 1),
    ],
)
def test_dimension_changing_identity_sign(args, e):
    # odd c, odd b and half-integer Sdet powers of the S-image all flip signs somewhere
    rep = checks.theorem4_check(WishartSpec(*args), e, Superfunction.named("one"))
    assert rep.passed, rep.line()


@pytest.mark.parametrize("args", [(2, 1, 0, 1, 0), (2, 3, 0, 2, 0), (1, 2, 0, 2, 0), (4, 1, 0, 1, 0)])
@pytest.mark.parametrize("psi", [math.pi, 0.8 * math.pi])
def test_dimension_changing_identity_without_enlargement(args, psi):
    # e = b = d = 0: the second supermatrix carries no variables, so the ordinary formula comes back
    spec = WishartSpec(*args)
    F = Superfunction.named("str")
    got, _ = checks.theorem4_rhs(spec, 0, F, 1.0, psi)
    ref = rhs_superbosonization(spec, F).value
    assert abs(got - ref) <= 1e-8 * abs(ref)


def test_dimension_changing_identity_needs_rotation():
    with pytest.raises(SpecError):
        checks.theorem4_rhs(WishartSpec(2, 1, 0, 2, 1), 1, Superfunction.named("one"), 1.0, 0.0)
    with pytest.raises(SpecError):
        checks.theorem4_rhs(WishartSpec(2, 1, 0, 2, 1), 1, Superfunction.named("one"), 1.0, math.pi / 3)
