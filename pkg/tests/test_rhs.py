import math

import pytest

from superwishart.ensembles import SpecError, WishartSpec
from superwishart.identities.checks import theorem1_check, theorem2_check
from superwishart.identities.rhs import rhs_hubbard_stratonovich, rhs_superbosonization
from superwishart.integrator import QuadratureSpec, Superfunction, lhs_integral

F = Superfunction.named

# beyond the beta = 2 grid: orthogonal and symplectic classes, d = 2 and c = 0
CASES = [
    (WishartSpec(1, 1, 0, 1, 1), "one"),
    (WishartSpec(1, 2, 0, 1, 1), "str"),
    (WishartSpec(1, 2, 0, 2, 1), "one"),
    (WishartSpec(4, 2, 0, 1, 1), "str"),
    (WishartSpec(2, 1, 0, 1, 2), "str"),
    (WishartSpec(2, 2, 0, 1, 2), "one"),
    (WishartSpec(4, 1, 0, 0, 2), "str"),
    (WishartSpec(2, 2, 0, 0, 2), "one"),
    (WishartSpec(1, 1, 0, 0, 1), "one"),
]


@pytest.mark.parametrize("spec,name", CASES, ids=lambda x: str(x))
def test_three_routes_agree(spec, name):
    lhs = lhs_integral(spec, F(name), QuadratureSpec()).value
    assert theorem1_check(spec, F(name), lhs=lhs).passed
    rep = theorem2_check(spec, F(name), lhs=lhs, tol=1e-3 if spec.beta == 4 else 2e-4)
    assert rep.passed, rep.line()


@pytest.mark.parametrize("spec", [WishartSpec(2, 2, 0, 2, 1), WishartSpec(2, 2, 0, 1, 2)])
@pytest.mark.parametrize("name", ["one", "str2"])
def test_hubbard_stratonovich_methods_agree(spec, name):
    a = rhs_hubbard_stratonovich(spec, F(name), method="delta").value
    b = rhs_hubbard_stratonovich(spec, F(name), method="sekiguchi").value
    assert a == pytest.approx(b, rel=1e-10, abs=1e-14)


def test_fermionic_only_value():
    val = rhs_superbosonization(WishartSpec(2, 1, 0, 0, 1), F("one")).value
    assert val == pytest.approx(-1 / (2 * math.pi), rel=1e-12)


@pytest.mark.parametrize("a,c,d", [(2, 1, 0), (1, 0, 1), (2, 1, 2), (1, 1, 1)])
def test_epsilon_scaling(a, c, d):
    # rescaling the vectors gives eps^{-a(c-d)} for beta = 2
    spec = WishartSpec(2, a, 0, c, d)
    v1 = rhs_superbosonization(spec, F("one"), epsilon=1.0).value
    v2 = rhs_superbosonization(spec, F("one"), epsilon=2.0).value
    assert v2 == pytest.approx(v1 * 2.0 ** (-a * (c - d)), rel=1e-10)


@pytest.mark.parametrize(
    "spec",
    [WishartSpec(2, 1, 1, 1, 1), WishartSpec(2, 1, 0, 2, 1), WishartSpec(2, 3, 0, 1, 3)],
)
def test_unsupported_specs(spec):
    with pytest.raises(SpecError):
        rhs_superbosonization(spec, F("one"))
    with pytest.raises(SpecError):
        rhs_hubbard_stratonovich(spec, F("one"))


def test_unknown_method():
    with pytest.raises(ValueError):
        rhs_hubbard_stratonovich(WishartSpec(2, 1, 0, 1, 1), F("one"), method="nope")
