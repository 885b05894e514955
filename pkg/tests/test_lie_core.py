import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lazardkit.errors import InvalidLieAlgebra, NotAnIdeal, TooLargeForExhaustive
from lazardkit.lie_core import (
    FiniteLieAlgebra,
    FreePresentation,
    LieElement,
    Morphism,
    Sublattice,
    bracket,
    centre,
    check_axioms,
    enumerate_ideals,
    enumerate_subalgebras,
    frattini,
    ideal_closure,
    is_ideal,
    is_p_central,
    is_powerful,
    lower_central_series,
    min_generators,
    nilpotency_class,
    omega_1,
    omega_extension_cover,
    p_multiple,
    quotient,
    rank_sectional,
    subalgebra_as_algebra,
    subalgebra_generated,
)

from sample_algebras import random_quotient


def test_heisenberg_basics():
    H = FiniteLieAlgebra.heisenberg(5)
    assert nilpotency_class(H) == 2
    assert centre(H) == Sublattice(H, [[0, 0, 1]])
    assert omega_1(H).is_whole()
    assert p_multiple(H).is_zero()
    assert not is_powerful(H)
    assert not is_p_central(H)
    assert min_generators(H) == 2
    x, y = H.basis_element(0), H.basis_element(1)
    assert bracket(x, y) == LieElement(H, (0, 0, 1))
    assert bracket(y, x) == LieElement(H, (0, 0, 4))


def test_sectional_rank_of_heisenberg():
    H = FiniteLieAlgebra.heisenberg(5)
    r = rank_sectional(H)
    # the whole algebra needs only two generators, the abelian subalgebras are 2-dimensional
    assert r.exact and r.value == 2
    assert H.whole().additive_rank() == 3


def test_subalgebra_and_ideal_counts_of_heisenberg():
    H = FiniteLieAlgebra.heisenberg(5)
    # 0, 31 lines, 6 planes through the centre, the whole space
    assert len(enumerate_subalgebras(H)) == 39
    # 0, the centre, 6 planes, the whole space
    assert len(enumerate_ideals(H)) == 9


def test_exhaustive_cap():
    L = FiniteLieAlgebra.abelian(5, (3, 3))
    with pytest.raises(TooLargeForExhaustive):
        enumerate_subalgebras(L)
    assert not rank_sectional(L).exact


def test_validator_reports_each_axiom():
    p = 5
    C = np.zeros((3, 3, 3), dtype=object)
    C[0, 1, 2] = 1  # missing the antisymmetric partner
    rep = check_axioms(FiniteLieAlgebra(p, (1, 1, 1), C, validate=False))
    assert rep.kinds() == ["antisymmetry"]
    assert ("antisymmetry", (1, 2)) in rep.violations

    # [b1, b2] = b3 with b1 of order p^2 and b3 of order p is fine; the reverse is not
    bad = FiniteLieAlgebra.from_brackets(p, (1, 1, 2), {(0, 1): {2: 1}}, validate=False)
    assert "well-defined" in check_axioms(bad).kinds()

    # [x1,x2]=x2, [x1,x3]=x2 and [x2,x3]=x1 breaks Jacobi
    J = FiniteLieAlgebra.from_brackets(p, (1, 1, 1), {(0, 1): {1: 1}, (0, 2): {1: 1}, (1, 2): {0: 1}}, validate=False)
    assert "jacobi" in check_axioms(J).kinds()
    with pytest.raises(InvalidLieAlgebra):
        FiniteLieAlgebra.from_brackets(p, (1, 1, 1), {(0, 1): {1: 1}, (0, 2): {1: 1}, (1, 2): {0: 1}})


def test_quotient_by_non_ideal_is_rejected():
    H = FiniteLieAlgebra.heisenberg(5)
    with pytest.raises(NotAnIdeal):
        quotient(H, Sublattice(H, [[1, 0, 0]]))


algebras = st.builds(
    random_quotient,
    d=st.integers(1, 3),
    c=st.integers(1, 3),
    p=st.sampled_from([5, 7]),
    seed=st.integers(0, 10**6),
)


@settings(max_examples=40, deadline=None)
@given(L=algebras, seed=st.integers(0, 10**6))
def test_random_algebras_are_lie(L, seed):
    assert check_axioms(L).valid
    series = lower_central_series(L)
    assert all(b <= a for a, b in zip(series, series[1:]))
    assert series[-1].is_zero()
    assert len(series) - 1 == nilpotency_class(L)
    # |Omega_1| = |L : pL| for a finite abelian p-group
    assert omega_1(L).order_exponent == L.order_exponent - p_multiple(L).order_exponent


def _random_sub(L, rng, k):
    return Sublattice(L, rng.integers(0, L.q, size=(k, L.n)))


@settings(max_examples=40, deadline=None)
@given(L=algebras, seed=st.integers(0, 10**6))
def test_sublattice_modular_law(L, seed):
    rng = np.random.default_rng(seed)
    A, B = _random_sub(L, rng, 2), _random_sub(L, rng, 2)
    assert A <= A + B and B <= A + B
    assert A & B <= A and A & B <= B
    assert (A + B).order_exponent + (A & B).order_exponent == A.order_exponent + B.order_exponent
    assert A + B == B + A and A & B == B & A
    V = A.elements(cap=10**5) if A.order <= 10**5 else None
    if V is not None:
        assert len(V) == A.order
        assert A.contains_many(V).all()


@settings(max_examples=30, deadline=None)
@given(L=algebras, seed=st.integers(0, 10**6))
def test_quotient_and_closures(L, seed):
    rng = np.random.default_rng(seed)
    S = _random_sub(L, rng, 1)
    I = ideal_closure(S)
    assert is_ideal(I) and S <= I
    assert ideal_closure(I) == I
    K = subalgebra_generated(S)
    assert subalgebra_generated(K) == K and K <= I
    Q, proj, lifts = quotient(L, I)
    assert Q.order_exponent + I.order_exponent == L.order_exponent
    assert proj.kernel() == I
    assert proj.image().is_whole()
    assert proj.is_bracket_preserving()
    assert np.array_equal(np.asarray(proj.apply_many(lifts), dtype=object) % np.asarray(Q.order_vec, dtype=object),
                          np.eye(Q.n, dtype=object))
    A, emb = subalgebra_as_algebra(K)
    assert check_axioms(A).valid and emb.kernel().is_zero() and emb.image() == K
    assert emb.is_bracket_preserving()


@settings(max_examples=25, deadline=None)
@given(L=algebras)
def test_frattini_quotient_rank(L):
    Phi = frattini(L.whole())
    assert p_multiple(L) <= Phi
    Q, _, _ = quotient(L, Phi)
    assert all(e == 1 for e in Q.orders)
    assert Q.n == min_generators(L)


@settings(max_examples=25, deadline=None)
@given(L=algebras)
def test_cover_of_p_multiple(L):
    res = omega_extension_cover(FreePresentation.from_algebra(L))
    assert all(res.checks.values())
    assert res.witness.image == p_multiple(L)


def test_morphism_rejects_ill_defined_maps():
    A = FiniteLieAlgebra.abelian(5, (1,))
    B = FiniteLieAlgebra.abelian(5, (2,))
    with pytest.raises(Exception):
        Morphism(A, B, [[1]])
    f = Morphism(A, B, [[5]])
    assert f.kernel().is_zero() and f.image().order_exponent == 1
    g = Morphism(B, A, [[1]])
    # g after f kills everything, f after g only pB
    assert f.compose(g).kernel().is_whole()
    assert g.compose(f).kernel() == B.whole().scaled(1)
