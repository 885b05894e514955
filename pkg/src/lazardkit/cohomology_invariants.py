"""Cohomology shape of powerful p-central groups with the Omega extension property.

For such a group the mod-p cohomology ring is an exterior algebra on e
degree-one classes tensored with a polynomial algebra on e degree-two
classes, e being the F_p-rank of Omega_1.  The census groups quotients of a
free nilpotent algebra by computable invariants and compares the number of
buckets with a ceiling derived from the bounded quantities of the structure
theorem.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import HypothesesNotMet, LazardError
from .hall_basis import witt_dimension
from .hat_construction import free_algebra, free_ideal, hall_basis
from .lazard_group import LazardGroup, group_structure_pipeline
from .lie_core import (
    FiniteLieAlgebra,
    Morphism,
    OmegaWitness,
    Sublattice,
    check_axioms,
    enumerate_ideals,
    graded_order_profile,
    is_p_central,
    is_powerful,
    min_generators,
    omega_1,
    quotient,
)


@dataclass(frozen=True)
class CohomologyShape:
    e: int

    @property
    def description(self) -> str:
        return f"exterior({self.e}) ⊗ polynomial({self.e}); exterior generators in degree 1, polynomial in degree 2"

    def poincare(self) -> "PoincareSeries":
        return PoincareSeries(self.e)


@dataclass(frozen=True)
class PoincareSeries:
    """(1 + t)^e / (1 - t^2)^e, which equals (1 - t)^-e."""

    e: int

    def closed_form(self) -> str:
        return f"(1+t)^{self.e}/(1-t^2)^{self.e}"

    def coefficients(self, n_max: int) -> list[int]:
        ext = [comb(self.e, k) for k in range(n_max + 1)]
        poly = [0] * (n_max + 1)
        for j in range(0, n_max // 2 + 1):
            # one monomial count per degree 2j in e polynomial variables
            poly[2 * j] = comb(j + self.e - 1, j) if self.e else int(j == 0)
        out = [0] * (n_max + 1)
        for a, x in enumerate(ext):
            if not x:
                continue
            for b in range(0, n_max + 1 - a):
                out[a + b] += x * poly[b]
        return out

    def binomial_form(self, n: int) -> int:
        if self.e == 0:
            return int(n == 0)
        return comb(n + self.e - 1, self.e - 1)


def poincare_coefficients(s: CohomologyShape, n_max: int) -> list[int]:
    return s.poincare().coefficients(n_max)


def canonical_lift_witness(L: FiniteLieAlgebra) -> OmegaWitness | None:
    """Try the cover with every order raised by one and the same constants."""
    cover = FiniteLieAlgebra(L.p, tuple(e + 1 for e in L.orders), np.asarray(L.C, dtype=object), validate=False)
    if not check_axioms(cover).valid or not is_p_central(cover):
        return None
    w = OmegaWitness(cover, Morphism(cover, L, np.eye(L.n, dtype=object), check=False), L.whole())
    return w if w.verify() else None


def restrict_witness(w: OmegaWitness, K: FiniteLieAlgebra, emb: Morphism) -> OmegaWitness:
    """Re-target a witness whose image is the subalgebra emb(K) so it lands in K."""
    S = w.image
    rows = []
    for v in np.asarray(w.projection.matrix, dtype=object):
        co = S.coordinates(v)
        if co is None:
            raise HypothesesNotMet(["omega-extension"])
        rows.append(co)
    proj = Morphism(w.cover, K, np.asarray(rows, dtype=object).reshape(w.cover.n, K.n), check=False)
    return OmegaWitness(w.cover, proj, K.whole())


def weigel_checks(L: FiniteLieAlgebra, witness: OmegaWitness | None = None) -> dict:
    if witness is None:
        witness = canonical_lift_witness(L)
    omega_ok = witness is not None and witness.projection.target is L and witness.image.is_whole() and witness.verify()
    return {"powerful": is_powerful(L), "p-central": is_p_central(L), "omega-extension": omega_ok}


def weigel_shape(G, witness: OmegaWitness | None = None) -> CohomologyShape:
    L = G.algebra if isinstance(G, LazardGroup) else G
    checks = weigel_checks(L, witness)
    failed = [k for k, v in checks.items() if not v]
    if failed:
        raise HypothesesNotMet(failed)
    return CohomologyShape(omega_1(L).order_exponent)


def shape_consistency(L: FiniteLieAlgebra, shape: CohomologyShape, n_max: int = 50) -> dict:
    series = shape.poincare()
    coeffs = series.coefficients(n_max)
    return {
        "poincare-binomial": all(coeffs[n] == series.binomial_form(n) for n in range(n_max + 1)),
        "e-equals-omega1-rank": shape.e == min_generators(omega_1(L)),
        "e-equals-generator-count": shape.e == min_generators(L),
    }


# ---------------------------------------------------------------------------
# census


@dataclass
class CensusRecord:
    instance: str
    key: tuple | None
    quantities: dict = field(default_factory=dict)
    failure: str | None = None


def _ideals_containing_power(d: int, c: int, p: int, k: int):
    """Ideals I with p^k L_c(X) ⊆ I, as lists of integer generators."""
    F = free_algebra(d, c, p, k)
    r = F.n
    out = []
    for I in enumerate_ideals(F, max_exponent=F.order_exponent, cap=10**6):
        gens = [list(map(int, row)) for row in np.asarray(I.H, dtype=object)]
        gens += [[p**k if i == j else 0 for j in range(r)] for i in range(r)]
        out.append(gens)
    return out


def census_instance(args) -> CensusRecord:
    label, d, c, p, gens = args
    try:
        ideal = free_ideal(d, c, p, gens)
        L, proj, _ = quotient(ideal.free, ideal.lattice, validate=False)
        if L.n == 0:
            key = (0, 0, 0, ())
            return CensusRecord(label, key, {"log_p |G|": 0, "E0": ideal.E0})
        G = LazardGroup(L)
        images = proj.apply_many(np.eye(ideal.free.n, dtype=object)[:d])
        rep = group_structure_pipeline(G, generators=images)
        Qhat = rep.structure.hat_quotient.algebra
        e = omega_1(Qhat).order_exponent if Qhat.n else 0
        key = (e, rep.N.order_exponent, rep.quantities["log_p image index"], graded_order_profile(L))
        q = {k: int(v) for k, v in rep.quantities.items()}
        if not rep.ok:
            bad = sorted(k for k, v in rep.verdicts.items() if not v)
            return CensusRecord(label, None, q, "verdicts failed: " + ",".join(bad))
        return CensusRecord(label, key, q)
    except LazardError as exc:
        return CensusRecord(label, None, {}, f"{type(exc).__name__}: {exc}")


def tuple_ceiling(d: int, c: int, k: int) -> int:
    """Upper bound on distinct keys: e, log|N|, log index and the profile."""
    r = len(hall_basis(d, c))
    prof = 1
    for i in range(1, c + 1):
        prof *= k * witt_dimension(d, i) + 1
    return (r + 1) * ((c - 1) * r + 1) ** 2 * prof


COARSENINGS = (
    ("full", (0, 1, 2, 3)),
    ("without-profile", (0, 1, 2)),
    ("e-and-kernel", (0, 1)),
    ("e-only", (0,)),
)


@dataclass
class CensusReport:
    p: int
    d: int
    c: int
    k: int
    records: list
    buckets: dict
    ceiling: int
    coarse_counts: dict

    @property
    def failures(self):
        return [r for r in self.records if r.failure]

    @property
    def verdicts(self) -> dict:
        counts = [self.coarse_counts[name] for name, _ in COARSENINGS]
        return {
            "bucket-count-within-ceiling": len(self.buckets) <= self.ceiling,
            "coarsening-monotone": all(a >= b for a, b in zip(counts, counts[1:])),
            "no-failures": not self.failures,
        }

    def summary(self) -> dict:
        return {
            "command": "census",
            "verdicts": self.verdicts,
            "quantities": {
                "p": self.p, "d": self.d, "c": self.c, "k": self.k,
                "instances": len(self.records),
                "buckets": len(self.buckets),
                "ceiling": self.ceiling,
                **{f"buckets[{n}]": v for n, v in self.coarse_counts.items()},
            },
            "buckets": [
                {"key": _jsonable(k), "count": len(v), "instances": v}
                for k, v in sorted(self.buckets.items(), key=lambda kv: repr(kv[0]))
            ],
            "failures": [{"instance": r.instance, "error": r.failure} for r in self.failures],
            "note": "bucket count is an upper-bound witness over computable invariants, not a count of cohomology rings; the ceiling is derived from the bounded quantities of the structure theorem",
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True, indent=2)


def _jsonable(key):
    return [list(x) if isinstance(x, tuple) else x for x in key]


def census(p: int, d: int, c: int, instances=None, k: int | None = None, workers: int = 1) -> CensusReport:
    """Bucket instances by (e, log|N|, log index, graded profile).

    ``instances`` is a list of (label, generators); by default every ideal of
    L_c(X) containing p^k L_c(X) (k = 1 unless given).  For explicit lists the
    ceiling uses the largest E0 seen, since p^E0 L_c(X) lies in each ideal.
    """
    if c >= p:
        raise ValueError("census needs c < p")
    explicit = instances is not None
    if not explicit:
        k = k or 1
        instances = [(f"ideal-{i}", g) for i, g in enumerate(_ideals_containing_power(d, c, p, k))]
    jobs = [(label, d, c, p, gens) for label, gens in instances]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(census_instance, jobs))
    else:
        records = [census_instance(j) for j in jobs]
    buckets: dict = {}
    for rec in records:
        if rec.key is not None:
            buckets.setdefault(rec.key, []).append(rec.instance)
    if explicit and k is None:
        k = max((int(r.quantities.get("E0", 1)) for r in records), default=1)
    coarse = {}
    for name, idx in COARSENINGS:
        coarse[name] = len({tuple(key[i] for i in idx) for key in buckets})
    return CensusReport(p, d, c, k, records, buckets, tuple_ceiling(d, c, k), coarse)
