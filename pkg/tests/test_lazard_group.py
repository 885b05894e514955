import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lazardkit.errors import ClassTooHigh, KernelNotCp
from lazardkit.lazard_group import (
    LazardGroup,
    Subgroup,
    carlson_subgroup,
    correspondence_checks,
    extension_from_normal,
    gp_is_powerful_pcentral_omegaep,
    gp_power_subgroup,
    group_axioms,
    group_class,
    group_closure_elements,
    group_structure_pipeline,
    is_powerful_group,
    normal_closure,
    omega_1_group,
    rank_bound_check,
    subgroup_generated,
)
from lazardkit.lie_core import FiniteLieAlgebra, Sublattice, p_multiple

from sample_algebras import random_quotient, small_algebras


def test_class_must_be_below_p():
    with pytest.raises(ClassTooHigh):
        LazardGroup(FiniteLieAlgebra.free_nilpotent(2, 3, 3, 1))


@pytest.mark.parametrize("L", small_algebras(5), ids=lambda L: f"n{L.n}")
def test_small_groups(L):
    G = LazardGroup(L)
    rng = np.random.default_rng(0)
    assert all(group_axioms(G, rng, samples=200).values())
    assert all(correspondence_checks(L, rng, samples=100).values())


def test_heisenberg_group():
    H = FiniteLieAlgebra.heisenberg(5)
    G = LazardGroup(H)
    x, y = np.array([[1, 0, 0]]), np.array([[0, 1, 0]])
    # commutator of the generators is central of order p
    com = G.commutator(x, y)
    assert com.tolist() == [[0, 0, 1]]
    assert group_class(G) == 2
    assert omega_1_group(G).carrier.is_whole()
    assert gp_power_subgroup(G).carrier.is_zero()
    assert not is_powerful_group(G)
    assert len(group_closure_elements(G, np.vstack([x, y]))) == 125


def test_power_report_on_free_class_two():
    G = LazardGroup(FiniteLieAlgebra.free_nilpotent(2, 2, 5, 2))
    rep = gp_is_powerful_pcentral_omegaep(G)
    assert rep.ok, rep.verdicts


def test_rank_checks():
    rep = rank_bound_check(LazardGroup(FiniteLieAlgebra.heisenberg(5)))
    assert rep.ok
    assert rep.quantities["sectional rank"] == 2


def test_carlson_requires_cyclic_kernel():
    L = FiniteLieAlgebra.abelian(5, (1, 1))
    G = LazardGroup(L)
    ext = extension_from_normal(G, G.whole())
    with pytest.raises(KernelNotCp):
        carlson_subgroup(ext, ext.Q.whole())


def test_carlson_on_central_extension():
    L = FiniteLieAlgebra.free_nilpotent(2, 2, 5, 2)
    G = LazardGroup(L)
    # a central element of order p
    N = normal_closure(G, np.array([[0, 0, 5]]))
    ext = extension_from_normal(G, N)
    assert all(ext.checks(np.random.default_rng(0)).values())
    rep = carlson_subgroup(ext, ext.Q.whole())
    assert rep.ok, rep.verdicts


algebras = st.builds(random_quotient, d=st.integers(1, 2), c=st.integers(1, 3),
                     p=st.sampled_from([5, 7]), seed=st.integers(0, 10**6))


@settings(max_examples=20, deadline=None)
@given(L=algebras, seed=st.integers(0, 10**6))
def test_power_subgroup_is_p_times_algebra(L, seed):
    if L.n == 0:
        return
    G = LazardGroup(L)
    assert gp_power_subgroup(G).carrier == p_multiple(L)
    rng = np.random.default_rng(seed)
    S = G.random_elements(rng, 2)
    K = subgroup_generated(G, S)
    X = K.carrier.elements(cap=20000) if K.order <= 20000 else G.random_elements(rng, 50)
    if K.order <= 20000:
        prod = G.mul(X[rng.integers(0, len(X), 200)], X[rng.integers(0, len(X), 200)])
        assert K.carrier.contains_many(prod).all()


@settings(max_examples=10, deadline=None)
@given(L=algebras, seed=st.integers(0, 10**6))
def test_group_structure_round_trip(L, seed):
    if L.n == 0:
        return
    rep = group_structure_pipeline(LazardGroup(L), rng=np.random.default_rng(seed), samples=50)
    assert rep.ok, {k: v for k, v in rep.verdicts.items() if not v}
