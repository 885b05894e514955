from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lazardkit.bch_engine import (
    BchEvaluator,
    FreeAssocPoly,
    assoc_exp,
    assoc_log,
    bch_series,
    dynkin_series,
    group_multiply,
    hall_to_assoc,
    verify_p_integrality,
    verify_round_trip,
)
from lazardkit.errors import ClassTooHigh
from lazardkit.lie_core import FiniteLieAlgebra, LieElement

from oracles import lie_bracket_words

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("c", [1, 2, 3, 4, 5])
def test_golden_series(c):
    assert bch_series(c).lines() == (GOLDEN / f"bch_c{c}.txt").read_text().splitlines()


def _words(expr):
    """Tiny evaluator for nested commutators of 'a' and 'b'."""
    if expr == "a":
        return {(1,): 1}
    if expr == "b":
        return {(2,): 1}
    u, v = expr
    return lie_bracket_words(_words(u), _words(v))


def test_textbook_low_degree_terms():
    # a + b + 1/2[a,b] + 1/12[a,[a,b]] - 1/12[b,[a,b]] - 1/24[b,[a,[a,b]]]
    ab = ("a", "b")
    terms = [(1, "a"), (1, "b"), (Fraction(1, 2), ab), (Fraction(1, 12), ("a", ab)),
             (Fraction(-1, 12), ("b", ab)), (Fraction(-1, 24), ("b", ("a", ab)))]
    want = {}
    for coef, e in terms:
        for w, x in _words(e).items():
            want[w] = want.get(w, 0) + coef * x
    s = bch_series(4)
    got = hall_to_assoc(s.as_dict(), s.basis).terms
    assert got == {w: Fraction(v) for w, v in want.items() if v}


@pytest.mark.parametrize("c", [1, 2, 3, 4])
def test_dynkin_agrees(c):
    assert dynkin_series(c).as_dict() == bch_series(c).as_dict()


@pytest.mark.parametrize("c", range(1, 7))
def test_round_trip(c):
    assert verify_round_trip(bch_series(c))


@pytest.mark.parametrize("c", range(1, 8))
def test_integrality_exactly_for_primes_above_class(c):
    s = bch_series(c)
    for p in (2, 3, 5, 7, 11):
        if p > c:
            assert verify_p_integrality(s, p)
    # some prime at most c divides a denominator once c >= 2
    if c >= 2:
        assert not verify_p_integrality(s, 2)


def test_exp_log_inverse():
    a = FreeAssocPoly.letter(1, 2, 5) + FreeAssocPoly.letter(2, 2, 5).scale(3)
    assert assoc_log(assoc_exp(a)) == a


def test_heisenberg_product():
    H = FiniteLieAlgebra.heisenberg(5)
    x = LieElement(H, (1, 0, 0))
    y = LieElement(H, (0, 1, 0))
    assert group_multiply(H, x, y).coords == (1, 1, 3)


def test_class_too_high():
    L = FiniteLieAlgebra.free_nilpotent(2, 3, 3, 1)
    with pytest.raises(ClassTooHigh):
        BchEvaluator(L)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_free_algebra_group_law(seed):
    L = FiniteLieAlgebra.free_nilpotent(2, 3, 5, 2)
    ev = BchEvaluator(L)
    rng = np.random.default_rng(seed)
    X, Y, Z = (rng.integers(0, 25, size=(20, L.n)) for _ in range(3))
    assert np.array_equal(ev.multiply_many(ev.multiply_many(X, Y), Z), ev.multiply_many(X, ev.multiply_many(Y, Z)))
    # x^k is k x
    assert np.array_equal(ev.power_many(X, 7), L.reduce(np.asarray(X, dtype=object) * 7))
    # x y x^-1 y^-1 vanishes exactly when [x, y] does in class 1 pieces
    Zr = np.zeros_like(X)
    assert np.array_equal(ev.multiply_many(X, Zr), L.reduce(X))
