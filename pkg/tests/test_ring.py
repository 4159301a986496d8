import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biinterp.errors import ConfigError, DecompositionError, LayoutError, NonUnitError
from biinterp.ring import (
    ProductRing,
    SSet,
    build_S,
    decompose_square_diff,
    inv,
    rt_member,
    units,
)

RINGS = ["5", "7", "5,7", "5,7,11,13", "3^2", "2^3", "3"]


def test_componentwise_arithmetic(F35):
    assert F35((3, 2)) + F35((4, 6)) == F35((2, 1))
    assert (F35((3, 2)) + F35((4, 6))).residues == (2, 1)


def test_zero_absorbs(F5):
    for x in F5.elements():
        assert F5(0) * x == F5.zero


def test_mod_nine_product():
    Z9 = ProductRing.parse("3^2")
    assert Z9(4) * Z9(7) == Z9(1)


def test_inverses(F35, F5):
    assert inv(F35((2, 3))).residues == (3, 5)
    assert inv(F5(1)) == F5(1)
    with pytest.raises(NonUnitError) as err:
        inv(ProductRing.parse("3^2")(3))
    assert err.value.component == 0


@pytest.mark.parametrize("desc,count", [("5", 4), ("5,7", 24), ("2^3", 4)])
def test_unit_counts(desc, count):
    R = ProductRing.parse(desc)
    assert len(units(R)) == count == R.unit_count


def test_units_mod_eight():
    R = ProductRing.parse("2^3")
    assert [u.residues[0] for u in units(R)] == [1, 3, 5, 7]


@pytest.mark.parametrize("bad", ["", "4", "5,,7", "5^0", "x", "5,5", "5^-1", "2^40"])
def test_bad_descriptors(bad):
    with pytest.raises(ConfigError):
        ProductRing.parse(bad)


def test_mixed_rings_rejected(F5, F7):
    with pytest.raises(LayoutError):
        F5(1) + F7(1)


def test_lex_order(F35):
    elems = F35.elements()
    assert [e.residues for e in elems] == sorted(itertools.product(range(5), range(7)))


@pytest.mark.parametrize(
    "desc,expected",
    [("7", [(0,), (1,)]), ("5,7", [(0, 0), (0, 1), (1, 1), (4, 1)]), ("3^2", [(0,), (1,), (8,)])],
)
def test_build_S(desc, expected):
    assert [s.residues for s in build_S(ProductRing.parse(desc))] == expected


@pytest.mark.parametrize(
    "desc,a,expected",
    [("7", 3, (2, 1, 0)), ("5", 0, (1, 1, 0)), ("2^3", 5, (1, 1, 5))],
)
def test_decompose_examples(desc, a, expected):
    R = ProductRing.parse(desc)
    wit = decompose_square_diff(R(a), build_S(R))
    assert (wit.xi.residues[0], wit.eta.residues[0], wit.s.residues[0]) == expected


@pytest.mark.parametrize("desc", RINGS)
def test_every_element_decomposes(desc):
    R = ProductRing.parse(desc)
    S = build_S(R)
    for a in R.elements():
        wit = decompose_square_diff(a, S)
        assert wit.xi.is_unit() and wit.eta.is_unit() and wit.s in S
        assert wit.xi * wit.xi - wit.eta * wit.eta + wit.s == a == wit.value


def test_decomposition_needs_enough_offsets():
    R = ProductRing.parse("2^3")
    only_zero = SSet([R(0)])
    with pytest.raises(DecompositionError):
        decompose_square_diff(R(1), only_zero)


@pytest.mark.parametrize(
    "r,T,expected", [((1, 0), (0, 1), True), ((2, 0), (0, 1), False)]
)
def test_rt_member(F35, r, T, expected):
    assert rt_member(F35(r), T) is expected


def test_rt_member_mod_nine():
    R = ProductRing.parse("3^2")
    assert rt_member(R(3), (0, 1)) is False
    assert R(3) * (R(3) - 1) == R(6)


def test_rt_member_non_reduced_caveat():
    # 3 is a root of x^2 mod 9 but not of x, so membership by the product
    # polynomial differs from membership in {0} once T has non-unit differences
    R = ProductRing.parse("3^2")
    assert rt_member(R(3), (0, 3)) is True
    assert rt_member(R(3), (0,)) is False


small = st.sampled_from(["5", "7", "5,7", "3^2", "2^3", "5,3^2"])


@settings(max_examples=60, deadline=None)
@given(small, st.data())
def test_ring_axioms(desc, data):
    R = ProductRing.parse(desc)
    pick = st.integers(0, R.order - 1).map(R.from_code)
    a, b, c = data.draw(pick), data.draw(pick), data.draw(pick)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == R.zero
    assert a * R.one == a
    if a.is_unit():
        assert a * inv(a) == R.one
