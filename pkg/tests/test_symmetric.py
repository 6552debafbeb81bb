import sympy as sp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superwishart.identities.symmetric import (
    SymmetricPolynomial,
    monomial_symmetric,
    operator_weight,
    partitions,
    sekiguchi_apply,
    sekiguchi_power,
    symbols,
)


def test_partitions():
    assert partitions(6, 2) == [(6, 0), (5, 1), (4, 2), (3, 3)]
    assert partitions(0, 3) == [(0, 0, 0)]
    assert len(partitions(4, 4)) == 5


def test_monomial_symmetric():
    r = symbols(2)
    assert sp.expand(monomial_symmetric((2, 1), r) - (r[0] ** 2 * r[1] + r[0] * r[1] ** 2)) == 0
    assert monomial_symmetric((1, 1), r) == r[0] * r[1]


def test_monomial_rejects_long_partition():
    with pytest.raises(ValueError):
        SymmetricPolynomial.monomial((1, 1, 1), 2)


def test_single_variable_operator_is_the_derivative():
    (r,) = symbols(1)
    for bt in (1, 2, 4):
        assert sp.expand(sekiguchi_apply(1, bt, r**5 + 3 * r, (r,)) - (5 * r**4 + 3)) == 0


sym2 = st.lists(
    st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(-3, 3)), min_size=1, max_size=4
)


@given(sym2, st.sampled_from([1, 2, 4]))
def test_operator_preserves_symmetry_and_lowers_degree(terms, bt):
    rs = symbols(2)
    f = sp.Integer(0)
    for i, j, c in terms:
        f += c * monomial_symmetric(tuple(sorted((i, j), reverse=True)), rs)
    f = sp.expand(f)
    g = sekiguchi_apply(2, bt, f, rs)  # raises unless the Vandermonde division is exact
    swapped = g.subs({rs[0]: rs[1], rs[1]: rs[0]}, simultaneous=True)
    assert sp.expand(g - swapped) == 0
    if g != 0:
        assert sp.Poly(g, *rs).total_degree() == sp.Poly(f, *rs).total_degree() - 2


@pytest.mark.parametrize("bt", [1, 2, 4])
def test_operator_on_the_product(bt):
    # D(r1 r2) = 1 + bt/2 for d = 2
    rs = symbols(2)
    assert sp.simplify(sekiguchi_apply(2, bt, rs[0] * rs[1], rs) - (1 + sp.Rational(bt, 2))) == 0


def test_operator_weight_matches_direct_power():
    rs = symbols(2)
    lam = (3, 2)
    direct = sekiguchi_power(2, sp.Rational(2), monomial_symmetric(lam, rs), 2, -1, rs)
    assert operator_weight(2, 2, 2, lam, -1) == direct.subs({r: 0 for r in rs})


def test_operator_weight_vanishes_off_degree():
    assert operator_weight(2, 2, 1, (3, 0)) == 0
