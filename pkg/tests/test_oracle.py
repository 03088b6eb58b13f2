import random

import pytest

from gadet.detengine import GroupRingElement, compute_report
from gadet.errors import CapExceeded
from gadet.field import field_for_q
from gadet.oracle import (
    brute_force_D,
    build_group_table,
    cyclic_det,
    cyclic_divisibility_check,
    divisibility_holds,
)
from gadet.rings import parse_poly


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_group_axioms(q):
    t = build_group_table(field_for_q(q))
    n = t.order
    assert n == q * (q - 1)
    for g in range(n):
        assert t.mul[0][g] == g == t.mul[g][0]
        assert t.mul[g][t.inv[g]] == 0
    rng = random.Random(q)
    for _ in range(200):
        a, b, c = (rng.randrange(n) for _ in range(3))
        assert t.mul[t.mul[a][b]][c] == t.mul[a][t.mul[b][c]]


def test_q8_orders():
    t = build_group_table(field_for_q(8))
    assert t.order == 56
    # index l * q + b: X is (l, b) = (1, 0) and Y_0 is (0, e_1)
    assert t.element_order(8) == 7
    assert t.element_order(1) == 2


def test_cap():
    with pytest.raises(CapExceeded):
        build_group_table(field_for_q(16))
    with pytest.raises(CapExceeded):
        build_group_table(field_for_q(9), cap=64)
    assert build_group_table(field_for_q(16), cap=512).order == 240


def test_brute_force_examples():
    for q in (2, 4, 8):
        spec = field_for_q(q)
        assert brute_force_D(GroupRingElement.identity(spec)) == 1
    spec4 = field_for_q(4)
    X = GroupRingElement.x_power(spec4, 1)
    assert brute_force_D(X) == compute_report(X).D
    spec8 = field_for_q(8)
    phi = GroupRingElement.from_components(spec8, {0: parse_poly("1+y", 2, 3)})
    assert brute_force_D(phi) == 0


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_frobenius_factorization(q):
    spec = field_for_q(q)
    rng = random.Random(q)
    for _ in range(10):
        F = GroupRingElement.random(spec, rng, 2)
        assert brute_force_D(F) == compute_report(F).D


def test_cyclic_det_examples():
    assert cyclic_det(8, [1, 0, 1, 1, 1]) == 32
    assert cyclic_det(26, [1, 0] + [1] * 12) == 169
    for m in (1, 2, 5, 12):
        assert cyclic_det(m, [1]) == 1


def test_divisibility_examples():
    assert not divisibility_holds(4, 2)
    assert divisibility_holds(9, 27) and not divisibility_holds(9, 9)
    assert cyclic_divisibility_check(1, [3])


@pytest.mark.parametrize("m", [4, 9])
def test_divisibility_fuzz(m):
    rng = random.Random(m)
    for _ in range(500):
        g = [rng.randint(-3, 3) for _ in range(m)]
        assert cyclic_divisibility_check(m, g)


@pytest.mark.parametrize("m", [4, 5, 6, 7])
def test_shift_sign(m):
    rng = random.Random(m)
    for _ in range(20):
        g = [rng.randint(-4, 4) for _ in range(m)]
        for t in range(m):
            shifted = g[-t:] + g[:-t] if t else g
            sign = (-1) ** (t * (m - 1))
            assert cyclic_det(m, shifted) == sign * cyclic_det(m, g)
