import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lazardkit.hat_construction import (
    build_hat_algebra,
    free_ideal,
    index_exponent_hat_over_free,
    random_free_ideal_generators,
    rank_bound_report,
    structure_pipeline,
    witt_sum_bound,
)
from lazardkit.lie_core import check_axioms, is_powerful


@pytest.mark.parametrize("d,c,p", [(1, 1, 5), (2, 2, 5), (2, 3, 5), (3, 2, 7), (2, 4, 7)])
def test_hat_algebra_is_powerful(d, c, p):
    A = build_hat_algebra(d, c, p, c + 1)
    assert check_axioms(A.algebra).valid
    assert is_powerful(A.algebra)
    rb = rank_bound_report(A)
    assert rb.exact == A.rank <= witt_sum_bound(d, c)
    assert index_exponent_hat_over_free(A) <= (c - 1) * A.rank


def test_inclusion_is_a_bracket_map():
    A = build_hat_algebra(2, 3, 5, 4)
    F = A.free if hasattr(A, "free") else None
    rng = np.random.default_rng(1)
    X = rng.integers(0, 5**4, size=(10, A.rank))
    Y = rng.integers(0, 5**4, size=(10, A.rank))
    from lazardkit.hat_construction import free_algebra

    L = free_algebra(2, 3, 5, 4)
    lhs = A.include_rows(L.bracket_many(X, Y))
    rhs = A.algebra.bracket_many(A.include_rows(X), A.include_rows(Y))
    assert np.array_equal(np.asarray(A.algebra.reduce(lhs), dtype=object), np.asarray(A.algebra.reduce(rhs), dtype=object))


def test_nakayama_detects_the_power():
    # ideal generated by 25 x1, 25 x2 and [x2, x1]: contains 25 L, not 5 L
    I = free_ideal(2, 2, 5, [[25, 0, 0], [0, 25, 0], [0, 0, 1]])
    assert I.E0 == 2 and not I.saturated
    assert I.index == 5**4


def test_worked_example():
    rep = structure_pipeline(2, 2, 5, [[25, 0, 0], [0, 25, 0], [0, 0, 5], [5, 0, 1]])
    assert rep.ok
    q = rep.quantities
    assert q["log_p |L|"] == q["log_p |J|"] + q["log_p |image|"]


cells = st.tuples(st.integers(1, 3), st.integers(1, 3), st.sampled_from([5, 7]))


@settings(max_examples=40, deadline=None)
@given(cell=cells, seed=st.integers(0, 10**6))
def test_pipeline_verdicts(cell, seed):
    d, c, p = cell
    gens = random_free_ideal_generators(d, c, p, np.random.default_rng(seed))
    rep = structure_pipeline(d, c, p, gens)
    assert rep.ok, {k: v for k, v in rep.verdicts.items() if not v}
    r = rep.hat.rank
    assert rep.kernel.order_exponent <= (c - 1) * r
