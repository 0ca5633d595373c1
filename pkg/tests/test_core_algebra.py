import cmath
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelexp import (
    Cyclotomic,
    CyclotomicDivisionError,
    GroupSpec,
    StructuralError,
    UnsupportedEmbeddingError,
    cyc_arith,
    cyc_root_of_unity,
    cyc_to_float,
    group_add,
    group_product,
    parse_group,
)
from abelexp.cyclotomic import cyclotomic_polynomial, euler_phi, field

import gen


def cyclotomics(order):
    phi = euler_phi(order)
    frac = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.lists(frac, min_size=phi, max_size=phi).map(lambda cs: Cyclotomic(order, cs))


# -- groups --------------------------------------------------------------------


def test_free_addition():
    Z = parse_group("Z")
    assert group_add(Z.element([2]), Z.element([3])) == Z.element([5])


def test_torsion_wraps():
    Z4 = parse_group("Z4")
    assert (Z4.element([], [3]) + Z4.element([], [2])).torsion == (1,)


def test_zero_is_identity():
    rng = random.Random(1)
    G = parse_group("Z^2xZ4xZ6")
    for _ in range(50):
        a = gen.rand_element(rng, G)
        assert a + G.zero() == a


def test_negative_residues_reduced():
    assert parse_group("Z5").element([], [-1]).torsion == (4,)


def test_group_product_concatenates():
    G = group_product(parse_group("Z^2"), parse_group("ZxZ4"))
    assert (G.free_rank, G.torsion_orders) == (3, (4,))


def test_product_with_trivial_group():
    G = parse_group("Z^2xZ6")
    assert group_product(G, GroupSpec(0, ())) == G


def test_embed_project_roundtrip():
    rng = random.Random(2)
    A, B = parse_group("ZxZ3"), parse_group("Z^2xZ4")
    for _ in range(50):
        a, b = gen.rand_element(rng, A), gen.rand_element(rng, B)
        assert A.project_pair(B, A.embed_pair(B, a, b)) == (a, b)


def test_mixed_groups_rejected():
    with pytest.raises(StructuralError):
        parse_group("Z").element([1]) + parse_group("Z^2").element([1, 1])


def test_torsion_orders_at_least_two():
    with pytest.raises(StructuralError):
        GroupSpec(1, (1,))


@pytest.mark.parametrize("text", ["Z^2xZ4", "Z", "Z^0", "Z6xZ4", "Z^3xZ2xZ2"])
def test_group_literal_roundtrip(text):
    assert str(parse_group(text)) == text


@pytest.mark.parametrize("text", ["Z^2xZ4", "Z3xZ5", "Z^3"])
def test_group_axioms(text):
    G = parse_group(text)
    rng = random.Random(3)
    for _ in range(200):
        a, b, c = (gen.rand_element(rng, G, 9) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a + (-a) == G.zero()
        assert a - b == a + (-b)


# -- cyclotomic arithmetic ---------------------------------------------------------


def test_gaussian_norm():
    i = Cyclotomic.zeta(4)
    assert (1 + i) * (1 - i) == Cyclotomic.rational(2, 4)


def test_i_squared():
    assert Cyclotomic.zeta(4) ** 2 == Cyclotomic.rational(-1, 4)


def test_zeta12_fourth_power():
    z = Cyclotomic.zeta(12)
    assert z**4 == z**2 - 1
    assert abs((z**4).to_complex() - cmath.exp(2j * cmath.pi * 4 / 12)) < 1e-12


def test_phi12():
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("n,k,order,expected", [(2, 1, 4, -1), (6, 3, 12, -1)])
def test_root_of_unity_values(n, k, order, expected):
    assert cyc_root_of_unity(n, k, order) == Cyclotomic.rational(expected, order)


def test_fifth_root_power():
    assert cyc_root_of_unity(5, 2, 20) ** 5 == Cyclotomic.one(20)


def test_root_outside_field():
    with pytest.raises(UnsupportedEmbeddingError):
        cyc_root_of_unity(3, 1, 4)


def test_to_float_examples():
    assert cyc_to_float(Cyclotomic.rational(2, 4)) == (2.0, 0.0)
    re, im = cyc_to_float(Cyclotomic.zeta(4))
    assert abs(re) < 1e-12 and abs(im - 1) < 1e-12
    re, im = cyc_to_float(1 + cyc_root_of_unity(3, 1, 12))
    assert abs(re - 0.5) < 1e-9 and abs(im - 0.8660254037844386) < 1e-9


def test_division_by_zero():
    with pytest.raises(CyclotomicDivisionError):
        cyc_arith(Cyclotomic.one(4), Cyclotomic.zero(4), "div")


def test_mixed_orders_rejected():
    with pytest.raises(StructuralError):
        Cyclotomic.zeta(4) + Cyclotomic.zeta(12)


@pytest.mark.parametrize("order", [4, 12, 20])
@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_field_axioms(order, data):
    a, b, c = (data.draw(cyclotomics(order)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == Cyclotomic.one(order)
        assert cyc_arith(cyc_arith(b, a, "div"), a, "mul") == b
    assert cyc_arith(cyc_arith(a, b, "sub"), b, "add") == a


@pytest.mark.parametrize("order", [4, 12, 20])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_to_float_is_ring_homomorphism(order, data):
    a, b = data.draw(cyclotomics(order)), data.draw(cyclotomics(order))
    fa, fb = complex(*cyc_to_float(a)), complex(*cyc_to_float(b))
    assert abs(complex(*cyc_to_float(a + b)) - (fa + fb)) < 1e-9
    assert abs(complex(*cyc_to_float(a * b)) - fa * fb) < 1e-9


@pytest.mark.parametrize("order", [1, 2, 3, 4, 5, 8, 12, 20, 24])
def test_primitivity(order):
    z = Cyclotomic.zeta(order)
    assert z**order == Cyclotomic.one(order)
    assert all(not (z**k).is_one() for k in range(1, order))


@pytest.mark.parametrize("order", [4, 12, 20])
def test_equality_is_coefficient_equality(order):
    rng = random.Random(order)
    for _ in range(50):
        a = gen.rand_scalar(rng, order)
        b = Cyclotomic(order, a.coeffs)
        assert a == b and hash(a) == hash(b)
        assert len(a.coeffs) == field(order).phi


def test_conjugate_and_embedding():
    z = Cyclotomic.zeta(12)
    assert z * z.conjugate() == Cyclotomic.one(12)
    i4 = Cyclotomic.zeta(4)
    assert i4.to_order(12) == Cyclotomic.zeta(12, 3)
    assert Fraction(1, 3) * Cyclotomic.one(4) == Cyclotomic.rational(Fraction(1, 3), 4)
