import itertools

import pytest

from gadet.achievers import (
    TargetPair,
    Witness,
    a_condition,
    achieve,
    achieve_coprime,
    achieve_square,
    build_witness,
    candidate_pairs,
    cyclotomic_witness,
    decide_membership,
    missing_monomial,
    q9_special_witness,
    q27_special_witness,
    x_witness,
    zq1_achievable,
)
from gadet.detengine import GroupRingElement, compute_report
from gadet.errors import (
    CongruenceViolation,
    NotCoprime,
    UnsupportedQ,
    UnsupportedTarget,
    VerificationFailed,
)
from gadet.field import field_for_q
from gadet.oracle import brute_force_D


def test_coprime_examples(q9):
    w = achieve_coprime(q9, 1, 1)
    assert w.elem == GroupRingElement.identity(q9)
    assert compute_report(w.elem).D == 1
    w = achieve_coprime(q9, 5, 14)
    assert w.params == {"ell": 5, "lambda": 0, "m": 1}
    w = achieve_coprime(field_for_q(8), 3, 3)
    assert brute_force_D(w.elem) == 3**8


def test_coprime_errors(q9):
    with pytest.raises(NotCoprime):
        achieve_coprime(q9, 2, 2)
    with pytest.raises(CongruenceViolation):
        achieve_coprime(q9, 5, 6)


@pytest.mark.parametrize("q", [4, 8, 9])
def test_coprime_closed_form_grid(q):
    spec = field_for_q(q)
    n = q - 1
    ells = [l for l in range(1, n) if __import__("math").gcd(l, n) == 1]
    for ell, lam, m in itertools.product(ells[:3], (-1, 0, 2), (-1, 0, 1)):
        A = ell + lam * n
        w = achieve_coprime(spec, A, A + m * q)
        r = compute_report(w.elem)
        assert (r.A, r.B) == (A, ell + lam * n + m * q)


def test_square_examples(q9):
    w = achieve_square(q9, 0, 0)
    assert (w.claimed.A, w.claimed.B) == (0, 0)
    w = achieve_square(q9, 1, 0)
    assert (w.claimed.A, w.claimed.B) == (64, 1)
    w = achieve_square(field_for_q(4), 1, 1)
    assert (w.claimed.A, w.claimed.B) == (9, 5)
    assert brute_force_D(w.elem) == 9 * 5**3
    with pytest.raises(UnsupportedQ):
        achieve_square(field_for_q(2), 1, 0)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 16, 25, 27, 32])
def test_missing_monomial_is_nonconstant(q):
    assert any(missing_monomial(field_for_q(q)))


def test_q9_special_examples():
    assert (q9_special_witness(0, 0).claimed.A, q9_special_witness(0, 0).claimed.B) == (32, 5)
    assert q9_special_witness(1, 0).claimed == TargetPair(96, 24, 9)
    assert q9_special_witness(0, 1).claimed == TargetPair(32, 14, 9)


def test_q27_special_examples():
    assert q27_special_witness("4*1", 0, 0).claimed == TargetPair(4, -1670, 27)
    assert q27_special_witness("4*2", 1, 0).claimed == TargetPair(60, -19 - 1622, 27)
    assert q27_special_witness("13^2", 0, 1).claimed == TargetPair(169, 3436 + 27, 27)
    with pytest.raises(UnsupportedTarget):
        q27_special_witness("4*7", 0, 0)


def test_witness_self_verification(q9):
    with pytest.raises(VerificationFailed):
        Witness(GroupRingElement.identity(q9), TargetPair(2, 2, 9), "coprime")


def test_witness_json(q9):
    out = q9_special_witness(0, 0).to_json()
    assert out["construction"] == "q9-special"
    assert out["claimed"] == {"A": "32", "B": "5"}
    assert out["params"] == {"c": "0", "b": "0"}
    assert GroupRingElement.from_json(out["element"]) == q9_special_witness(0, 0).elem


@pytest.mark.parametrize("q", [4, 8, 9, 27])
def test_special_elements(q):
    spec = field_for_q(q)
    assert cyclotomic_witness(spec).claimed.B == 0
    assert x_witness(spec).claimed.D == (-1 if spec.n % 2 == 0 else 1)


def test_zq1_examples():
    assert zq1_achievable(8, 32) == "yes"
    assert zq1_achievable(8, 2) == "no"
    assert zq1_achievable(26, 26) == "no"
    assert zq1_achievable(5, 10) == "no"
    assert zq1_achievable(5, 25) == "yes"
    assert zq1_achievable(4, 8) == "no" and zq1_achievable(4, 16) == "yes"
    assert zq1_achievable(12, 1) == "yes"
    assert zq1_achievable(12, 2) == "no"
    assert zq1_achievable(12, 8 * 3 * 3) == "unknown"


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7, 8])
def test_zq1_against_enumeration(m):
    from gadet.oracle import cyclic_det

    bound = 1 if m > 6 else 2
    seen = {cyclic_det(m, g) for g in itertools.product(range(-bound, bound + 1), repeat=m)}
    for A in range(-60, 61):
        verdict = zq1_achievable(m, A)
        if A in seen:
            assert verdict != "no", (m, A)
        if verdict == "no":
            assert A not in seen


def test_decide_examples():
    d, w = decide_membership(field_for_q(8), 3**8)
    assert d.verdict and (d.A, d.B) == (3**8, 1) and w.D == 3**8
    d, w = decide_membership(field_for_q(9), 32 * 5**8)
    assert d.verdict and w.D == 32 * 5**8
    D = 4 * 31**26
    d, w = decide_membership(field_for_q(27), D)
    assert d.verdict and w.D == D


def test_decide_q9_64_is_member(q9):
    # 64 = 8^2 is reached by the square construction with c = 1, B = 1
    d, w = decide_membership(q9, 64)
    assert d.verdict and (d.A, d.B) == (64, 1)
    assert compute_report(w.elem).D == 64


def test_decide_zero_and_unsupported():
    d, w = decide_membership(field_for_q(8), 0)
    assert d.verdict and w.construction == "cyclotomic" and w.D == 0
    with pytest.raises(UnsupportedQ):
        decide_membership(field_for_q(16), 5)
    with pytest.raises(UnsupportedQ):
        decide_membership(field_for_q(5), 5)


def test_decide_non_members():
    assert not decide_membership(field_for_q(9), 2)[0].verdict
    assert not decide_membership(field_for_q(8), 7)[0].verdict
    assert not decide_membership(field_for_q(27), 2)[0].verdict


def test_monomial_sign_recipe(q27):
    # A / 4 = 7 (mod 13) needs the X factor
    A = 28
    B = A + 27
    w = achieve(q27, A, B)
    assert w.construction == "monomial-sign"
    r = compute_report(w.elem)
    assert (r.A, r.B) == (A, B)


def test_candidate_order():
    assert list(candidate_pairs(9, 3**8 * 5)) == [(3**8 * 5, 1), (3**8 * 5, -1), (5, 3), (5, -3)]


@pytest.mark.parametrize("q", [9, 27])
def test_a_condition_matches_zq1(q):
    for A in range(-400, 401):
        assert a_condition(q, A) == (zq1_achievable(q - 1, A) == "yes")


def test_achieve_unsupported():
    with pytest.raises(UnsupportedTarget):
        achieve(field_for_q(9), 2, 2)
    with pytest.raises(UnsupportedTarget):
        build_witness(field_for_q(9), {"construction": "nope", "params": {}})


from hypothesis import given, settings
from hypothesis import strategies as st


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([4, 8, 9]), st.integers(-300, 300), st.integers(-3, 3))
def test_achievable_pairs_are_decided_yes(q, A, m):
    spec = field_for_q(q)
    if A == 0 or not a_condition(q, A):
        return
    B = A + m * q
    if B == 0:
        return
    w = achieve(spec, A, B)
    assert compute_report(w.elem).D == A * B ** (q - 1)
    d, witness = decide_membership(spec, A * B ** (q - 1))
    assert d.verdict and witness.D == A * B ** (q - 1)
