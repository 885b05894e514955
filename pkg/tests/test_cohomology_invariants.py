import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lazardkit.cohomology_invariants import (
    CohomologyShape,
    census,
    poincare_coefficients,
    restrict_witness,
    shape_consistency,
    tuple_ceiling,
    weigel_checks,
    weigel_shape,
)
from lazardkit.errors import HypothesesNotMet
from lazardkit.lazard_group import LazardGroup, gp_is_powerful_pcentral_omegaep
from lazardkit.lie_core import FiniteLieAlgebra, subalgebra_as_algebra


def test_poincare_examples():
    assert poincare_coefficients(CohomologyShape(2), 4) == [1, 2, 3, 4, 5]
    assert poincare_coefficients(CohomologyShape(0), 4) == [1, 0, 0, 0, 0]
    assert poincare_coefficients(CohomologyShape(1), 4) == [1, 1, 1, 1, 1]


@given(e=st.integers(0, 8))
def test_poincare_is_binomial(e):
    s = CohomologyShape(e).poincare()
    assert s.coefficients(50) == [s.binomial_form(n) for n in range(51)]


def test_abelian_shape():
    L = FiniteLieAlgebra.abelian(5, (1, 1))
    shape = weigel_shape(LazardGroup(L))
    assert shape.e == 2
    assert all(shape_consistency(L, shape).values())


def test_heisenberg_fails_hypotheses():
    with pytest.raises(HypothesesNotMet) as err:
        weigel_shape(FiniteLieAlgebra.heisenberg(5))
    assert set(err.value.failed) == {"powerful", "p-central", "omega-extension"}


def test_power_subgroup_shape():
    L = FiniteLieAlgebra.free_nilpotent(2, 2, 5, 2)
    rep = gp_is_powerful_pcentral_omegaep(LazardGroup(L))
    K, emb = subalgebra_as_algebra(rep.power_subgroup.carrier)
    w = restrict_witness(rep.cover.witness, K, emb)
    shape = weigel_shape(K, w)
    assert shape.e == 3
    assert all(shape_consistency(K, shape).values())


def test_cyclic_census():
    rep = census(5, 1, 1, k=4)
    # orders 1, p, ..., p^4
    assert len(rep.buckets) == 5
    assert rep.coarse_counts["e-only"] == 2
    assert all(rep.verdicts.values())
    assert len(rep.buckets) <= tuple_ceiling(1, 1, 4)


def test_census_is_deterministic():
    a = census(5, 2, 2).summary_json()
    b = census(5, 2, 2).summary_json()
    assert a == b
    s = json.loads(a)
    assert s["quantities"]["instances"] == 9
    assert all(s["verdicts"].values())
