from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lazardkit.errors import DenominatorNotInvertible, NotPrime
from lazardkit.padic_arith import (
    Modulus,
    contains_array,
    howell_array,
    intersect_arrays,
    is_prime,
    kernel_array,
    reduce_rational,
    reduce_rational_int,
    smith_array,
    solve_left_array,
    span_size_exponent,
    vp,
)

from oracles import all_vectors, span_by_enumeration


def test_reduce_half_mod_25():
    assert reduce_rational(Fraction(1, 2), Modulus(5, 2)).value == 13


def test_reduce_rejects_p_in_denominator():
    with pytest.raises(DenominatorNotInvertible):
        reduce_rational(Fraction(1, 5), Modulus(5, 2))


def test_modulus_rejects_composite():
    with pytest.raises(NotPrime):
        Modulus(4, 1)


def test_small_primes():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_howell_example():
    H, piv = howell_array(np.array([[2, 4]]), 5, 2)
    assert H.tolist() == [[1, 2]]
    assert piv == [(0, 0)]


def test_vp():
    assert vp(250, 5) == 3
    assert vp(7, 5) == 0


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 10**6), min_size=n, max_size=n), min_size=0, max_size=4)
)


@settings(max_examples=80, deadline=None)
@given(p=st.sampled_from([2, 3, 5]), E=st.integers(1, 3), rows=matrices, data=st.data())
def test_howell_is_canonical_for_the_span(p, E, rows, data):
    n = len(rows[0]) if rows else 1
    A = np.array(rows, dtype=np.int64).reshape(-1, n) % p**E
    H, piv = howell_array(A, p, E)
    # any other generating set of the same span gives the same form
    mix = data.draw(st.lists(st.lists(st.integers(0, p**E - 1), min_size=A.shape[0], max_size=A.shape[0]),
                             min_size=0, max_size=3))
    extra = (np.array(mix, dtype=np.int64).reshape(-1, A.shape[0]) @ A) % p**E if A.shape[0] else np.zeros((0, n), dtype=np.int64)
    B = np.vstack([A[::-1], extra, H]) if A.shape[0] else H
    H2, _ = howell_array(B, p, E)
    assert np.array_equal(H, H2)
    H3, _ = howell_array(H, p, E)
    assert np.array_equal(H, H3)
    assert contains_array(H, piv, A, p, E).all() if A.shape[0] else True


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from([2, 3, 5]), E=st.integers(1, 2), rows=matrices)
def test_span_size_matches_enumeration(p, E, rows):
    n = len(rows[0]) if rows else 1
    if p ** (E * n) > 5**4:
        return
    A = np.array(rows, dtype=np.int64).reshape(-1, n) % p**E
    H, piv = howell_array(A, p, E)
    span = span_by_enumeration(A, p, E, n)
    assert p ** span_size_exponent(piv, E) == len(span)
    V = all_vectors(p, E, n)
    mask = contains_array(H, piv, V, p, E)
    assert {tuple(map(int, v)) for v in V[mask]} == span


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from([3, 5]), E=st.integers(1, 3), rows=matrices)
def test_kernel_and_solve(p, E, rows):
    n = len(rows[0]) if rows else 1
    A = np.array(rows, dtype=np.int64).reshape(-1, n) % p**E
    if A.shape[0] == 0:
        return
    K, _ = kernel_array(A, p, E)
    assert not ((K @ A) % p**E).any()
    # |ker| * |image| = p^(E m)
    _, piv_img = howell_array(A, p, E)
    _, piv_ker = howell_array(K, p, E) if K.shape[0] else (None, [])
    assert span_size_exponent(piv_img, E) + span_size_exponent(piv_ker, E) == E * A.shape[0]
    x = np.arange(A.shape[0]) % p**E
    v = (x @ A) % p**E
    sol = solve_left_array(A, v, p, E)
    assert sol is not None and np.array_equal((np.asarray(sol) @ A) % p**E, v)


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from([3, 5]), E=st.integers(1, 3), rows=matrices)
def test_smith_spans_the_same_module(p, E, rows):
    n = len(rows[0]) if rows else 1
    A = np.array(rows, dtype=np.int64).reshape(-1, n) % p**E
    exps, V, Vinv = smith_array(A, p, E)
    Vinv = np.asarray(Vinv, dtype=object)
    D = np.array([[p**e if i == j else 0 for j in range(n)] for i, e in enumerate(exps)], dtype=object).reshape(len(exps), n)
    S = (D @ Vinv) % p**E if len(exps) else np.zeros((0, n), dtype=np.int64)
    H1, _ = howell_array(A.astype(object), p, E)
    H2, _ = howell_array(np.asarray(S, dtype=object).reshape(-1, n), p, E)
    assert np.array_equal(np.asarray(H1, dtype=object), np.asarray(H2, dtype=object))
    assert np.array_equal((np.asarray(V, dtype=object) @ Vinv) % p**E, np.eye(n, dtype=object))


@settings(max_examples=40, deadline=None)
@given(p=st.sampled_from([2, 3]), rows_a=matrices, rows_b=matrices)
def test_intersection_matches_sets(p, rows_a, rows_b):
    E = 2
    n = 2
    A = np.array([r[:1] * n for r in rows_a], dtype=np.int64).reshape(-1, n) % p**E
    B = np.array([r[-1:] + r[:1] for r in rows_b], dtype=np.int64).reshape(-1, n) % p**E
    if not A.shape[0] or not B.shape[0]:
        return
    H, piv = intersect_arrays(A, B, p, E)
    want = span_by_enumeration(A, p, E, n) & span_by_enumeration(B, p, E, n)
    got = span_by_enumeration(H, p, E, n) if len(H) else {(0,) * n}
    assert got == want
