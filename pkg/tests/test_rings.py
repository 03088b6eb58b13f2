import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gadet.errors import NotIntegral, PrimeMismatch, ShapeMismatch
from gadet.rings import (
    AbRingElement,
    CycInt,
    ab_add,
    ab_evaluate,
    ab_evaluate_all,
    ab_from_character_values,
    ab_mul,
    ab_sum_over_nontrivial,
    cyc_add,
    cyc_is_rational,
    cyc_monomial,
    cyc_mul,
    format_poly,
    parse_poly,
    parse_product,
)

ALPHA9 = "3-y^2+y^2z^2-y^2z+yz^2+2yz+3z^2"
BETA9 = "1+y-y^2-z+3z^2+yz-4y^2z+2yz^2-2y^2z^2"


def cyc(p, *c):
    return CycInt(p, tuple(c))


def test_cyc_basic_examples():
    z = cyc(3, 0, 1)
    assert cyc_mul(z, z) == cyc(3, -1, -1)
    assert cyc_add(cyc_add(CycInt.rational(3, 1), z), cyc_mul(z, z)).is_zero()
    assert cyc_mul(cyc_monomial(5, 2), cyc_monomial(5, 3)) == CycInt.rational(5, 1)


def test_cyc_monomial_examples():
    assert cyc_monomial(3, 0) == CycInt.rational(3, 1)
    assert cyc_monomial(3, 2) == cyc(3, -1, -1)
    assert cyc_monomial(5, 4) == cyc(5, -1, -1, -1, -1)


def test_cyc_is_rational_examples():
    assert cyc_is_rational(cyc(3, 7, 0)) == 7
    assert cyc_is_rational(cyc(3, 0, 1)) is None
    assert cyc_is_rational(CycInt.from_exponent_form(3, [1, 1, 1])) == 0


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_sum_of_roots_is_zero(p):
    assert cyc_is_rational(CycInt.from_exponent_form(p, [1] * p)) == 0


def test_cyc_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        cyc(3, 1, 0) + cyc(5, 1, 0, 0, 0)
    with pytest.raises(ShapeMismatch):
        CycInt(3, (1,))


def test_ab_mul_q9_beta():
    alpha = parse_poly(ALPHA9, 3, 2)
    t = parse_poly("1-y^2z^2", 3, 2)
    assert ab_mul(t, alpha) == parse_poly(BETA9, 3, 2)


def test_ab_small_examples():
    x = parse_poly("2+y-3yz", 3, 2)
    assert x * AbRingElement.constant(3, 2, 1) == x
    assert parse_poly("y", 3, 1) * parse_poly("y^2", 3, 1) == AbRingElement.constant(3, 1, 1)
    assert ab_add(x, -x) == AbRingElement.zero(3, 2)
    with pytest.raises(ShapeMismatch):
        ab_add(x, parse_poly("y", 3, 1))


def test_ab_evaluate_examples():
    x = parse_poly("2+y-3yz", 3, 2)
    assert ab_evaluate(x, (0, 0)) == CycInt.rational(3, 0)
    assert ab_evaluate(parse_poly("1+y+y^2", 3, 1), (1,)).is_zero()
    assert ab_evaluate(parse_poly("y^2z", 3, 2), (1, 1)) == CycInt.rational(3, 1)


def test_from_character_values_examples():
    assert ab_from_character_values(3, 2, [CycInt.rational(3, 5)] * 9) == AbRingElement.constant(
        3, 2, 5
    )
    vals = [CycInt.rational(3, 3), CycInt.rational(3, 0), CycInt.rational(3, 0)]
    assert ab_from_character_values(3, 1, vals) == parse_poly("1+y+y^2", 3, 1)
    with pytest.raises(NotIntegral):
        ab_from_character_values(3, 1, [CycInt.rational(3, 1)] + [CycInt.rational(3, 0)] * 2)


def test_sum_over_nontrivial_examples():
    assert ab_sum_over_nontrivial(parse_poly(ALPHA9, 3, 2)) == (19, 3)
    assert ab_sum_over_nontrivial(parse_poly(BETA9, 3, 2)) == (9, 1)
    assert ab_sum_over_nontrivial(AbRingElement.constant(3, 2, 4)) == (32, 4)


def test_text_roundtrip():
    for text in (ALPHA9, BETA9, "7yw - 145w^2 - 7y^2w + 145y^2w^2"):
        k = 3 if "w" in text else 2
        x = parse_poly(text, 3, k)
        assert parse_poly(format_poly(x), 3, k) == x
    prod = parse_product(["-1", "y-1", "yw", "145yw+7"], 3, 3)
    assert prod == parse_poly("7yw - 145w^2 - 7y^2w + 145y^2w^2", 3, 3)
    with pytest.raises(ValueError):
        parse_poly("2x", 3, 2)


def test_json_roundtrip():
    x = parse_poly(ALPHA9, 3, 2)
    assert x.to_json()["coeffs"][0] == 3
    assert AbRingElement.from_json(x.to_json()) == x


PK = st.sampled_from([(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2)])


@st.composite
def ab_elements(draw, pk=None):
    p, k = pk if pk is not None else draw(PK)
    coeffs = draw(st.lists(st.integers(-50, 50), min_size=p**k, max_size=p**k))
    return AbRingElement(p, k, tuple(coeffs))


@st.composite
def ab_pairs(draw):
    pk = draw(PK)
    return draw(ab_elements(pk)), draw(ab_elements(pk))


@settings(max_examples=1000, deadline=None)
@given(ab_elements())
def test_character_transform_roundtrip(x):
    assert ab_from_character_values(x.p, x.k, ab_evaluate_all(x)) == x


@settings(max_examples=200, deadline=None)
@given(ab_pairs(), st.data())
def test_evaluation_is_a_ring_homomorphism(pair, data):
    x, y = pair
    s = tuple(data.draw(st.integers(0, x.p - 1)) for _ in range(x.k))
    assert ab_evaluate(x * y, s) == ab_evaluate(x, s) * ab_evaluate(y, s)
    assert ab_evaluate(x + y, s) == ab_evaluate(x, s) + ab_evaluate(y, s)


@settings(max_examples=200, deadline=None)
@given(ab_elements())
def test_sum_over_all_characters(x):
    total = CycInt.rational(x.p, 0)
    for v in ab_evaluate_all(x):
        total = total + v
    assert total.rational_value() == x.size * x.constant_term()
    S, a0 = ab_sum_over_nontrivial(x)
    assert S + x.value_at_ones() == x.size * a0


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.data())
def test_cyc_ring_axioms(p, data):
    coeffs = st.lists(st.integers(-20, 20), min_size=p - 1, max_size=p - 1)
    a, b, c = (CycInt(p, tuple(data.draw(coeffs))) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
