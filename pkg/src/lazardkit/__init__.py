"""Finite nilpotent Z_p-Lie algebras and their p-groups under the Lazard correspondence."""

from .bch_engine import BchEvaluator, BchSeries, bch_series, dynkin_series, group_multiply
from .cohomology_invariants import CohomologyShape, census, poincare_coefficients, weigel_shape
from .errors import LazardError
from .hall_basis import HallBasis, HallElement, witt_dimension
from .hat_construction import build_hat_algebra, free_ideal, structure_pipeline
from .lazard_group import (
    LazardGroup,
    carlson_subgroup,
    exp_group,
    gp_is_powerful_pcentral_omegaep,
    group_structure_pipeline,
    log_algebra,
)
from .lie_core import FiniteLieAlgebra, LieElement, Morphism, Sublattice, check_axioms, quotient
from .padic_arith import Modulus, Residue

__all__ = [
    "BchEvaluator", "BchSeries", "bch_series", "dynkin_series", "group_multiply",
    "CohomologyShape", "census", "poincare_coefficients", "weigel_shape",
    "LazardError", "HallBasis", "HallElement", "witt_dimension",
    "build_hat_algebra", "free_ideal", "structure_pipeline",
    "LazardGroup", "carlson_subgroup", "exp_group", "gp_is_powerful_pcentral_omegaep",
    "group_structure_pipeline", "log_algebra",
    "FiniteLieAlgebra", "LieElement", "Morphism", "Sublattice", "check_axioms", "quotient",
    "Modulus", "Residue",
]
