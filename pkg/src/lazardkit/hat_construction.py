"""Powerful hull of the free nilpotent algebra and the structure pipeline.

Coordinates on the hull use the rescaled Hall basis: the element written
``ĥ`` for a Hall element h of weight w stands for ``p^-(w-1) h``.  In these
coordinates every structure constant picks up exactly one factor p, and the
free algebra sits inside as the span of ``p^(w-1) ĥ``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import EmbeddingFailure, HatLemmaViolation, InputError, NotAnIdeal
from .hall_basis import HallBasis
from .lie_core import (
    FiniteLieAlgebra,
    Morphism,
    OmegaWitness,
    Sublattice,
    bracket_span,
    ideal_closure,
    is_ideal,
    is_p_central,
    is_powerful,
    omega_1,
    quotient,
)
from .padic_arith import vp


@functools.lru_cache(maxsize=64)
def hall_basis(d: int, c: int) -> HallBasis:
    return HallBasis(d, c)


@functools.lru_cache(maxsize=256)
def free_algebra(d: int, c: int, p: int, E: int) -> FiniteLieAlgebra:
    return FiniteLieAlgebra.free_nilpotent(d, c, p, E, basis=hall_basis(d, c))


@dataclass(frozen=True)
class ScaledFreeAlgebra:
    d: int
    c: int
    p: int
    E: int
    basis: HallBasis = field(repr=False)
    algebra: FiniteLieAlgebra = field(repr=False)

    @property
    def weights(self) -> list[int]:
        return self.basis.weights

    @property
    def rank(self) -> int:
        return len(self.basis)

    def scaling(self) -> np.ndarray:
        """p^(w-1) per basis element."""
        return np.array([self.p ** (w - 1) for w in self.weights], dtype=object)

    def inclusion(self, E_free: int | None = None) -> Morphism:
        """L_c(X) mod p^E_free into the hull (needs E_free + c - 1 <= E)."""
        E_free = self.E - self.c + 1 if E_free is None else E_free
        F = free_algebra(self.d, self.c, self.p, E_free)
        return Morphism(F, self.algebra, np.diag(self.scaling()), check=False)

    def include_rows(self, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=object).reshape(-1, self.rank)
        return self.algebra.reduce(rows * self.scaling()[None, :])


@functools.lru_cache(maxsize=256)
def build_hat_algebra(d: int, c: int, p: int, E: int) -> ScaledFreeAlgebra:
    basis = hall_basis(d, c)
    r = len(basis)
    consts = {}
    for a in range(r):
        for b in range(r):
            vec = basis.pair(a, b)
            if vec:
                consts[(a, b)] = {k: p * v for k, v in vec.items()}
    A = FiniteLieAlgebra(p, (E,) * r, consts, validate=False, name=f"hat(d={d},c={c})")
    return ScaledFreeAlgebra(d, c, p, E, basis, A)


def witt_sum_bound(d: int, c: int) -> int:
    """d + d^2 + ... + d^c, i.e. (d^(c+1) - d)/(d - 1)."""
    return sum(d**i for i in range(1, c + 1))


@dataclass
class RankBound:
    exact: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.exact <= self.bound


def rank_bound_report(A: ScaledFreeAlgebra) -> RankBound:
    rep = RankBound(A.rank, witt_sum_bound(A.d, A.c))
    assert rep.holds
    return rep


def index_exponent_hat_over_free(A: ScaledFreeAlgebra) -> int:
    return sum(w - 1 for w in A.weights)


def index_hat_over_free(A: ScaledFreeAlgebra) -> int:
    k = index_exponent_hat_over_free(A)
    assert k <= (A.c - 1) * A.rank
    return A.p**k


# ---------------------------------------------------------------------------
# ideals of the free algebra


@dataclass
class FreeIdeal:
    """Finite-index ideal I of L_c(X), stored modulo p^E0 where p^E0 L ⊆ I."""

    d: int
    c: int
    p: int
    E0: int
    lattice: Sublattice
    saturated: bool

    @property
    def free(self) -> FiniteLieAlgebra:
        return self.lattice.parent

    @property
    def index(self) -> int:
        return self.lattice.index


def _max_valuation(gens, p: int) -> int:
    vals = [vp(int(x), p) for row in gens for x in row if int(x)]
    return max(vals, default=0)


def free_ideal(d: int, c: int, p: int, generators, close: bool = True) -> FreeIdeal:
    """Ideal generated by integer vectors in Hall coordinates.

    The smallest T with p^T L ⊆ I + p^(T+1) L gives p^T L ⊆ I (Nakayama), so I
    is of finite index and exact modulo p^T.  If no T up to (max valuation of
    the input) + c works, p^T L is added to make the index finite.
    """
    r = len(hall_basis(d, c))
    gens = [list(map(int, g)) for g in generators]
    for g in gens:
        if len(g) != r:
            raise InputError(f"generator has {len(g)} coordinates, Hall basis has {r}")
    t_max = _max_valuation(gens, p) + c
    M = t_max + 1
    F = free_algebra(d, c, p, M)
    raw = Sublattice(F, np.asarray(gens, dtype=object).reshape(-1, r))
    J = ideal_closure(raw) if close else raw
    if not close and not is_ideal(J):
        raise NotAnIdeal("generators do not span an ideal of the free algebra")
    E0, saturated = t_max, True
    for T in range(0, t_max + 1):
        test = J + F.whole().scaled(T + 1)
        if F.whole().scaled(T) <= test:
            E0, saturated = T, False
            break
    E0 = max(E0, 1)
    F0 = free_algebra(d, c, p, E0)
    I0 = Sublattice(F0, np.asarray(J.H, dtype=object) % p**E0)
    if close:
        I0 = ideal_closure(I0)
    return FreeIdeal(d, c, p, E0, I0, saturated)


@dataclass
class HatIdeal:
    hat: ScaledFreeAlgebra
    lattice: Sublattice
    layers: list

    def lemma_holds(self) -> bool:
        """[Î, L̂] ⊆ pÎ."""
        A = self.hat.algebra
        br = A.bracket_with_basis(self.lattice.H)
        return bool(self.lattice.scaled(1).contains_many(br).all()) if len(br) else True


def build_hat_ideal(A: ScaledFreeAlgebra, ideal: FreeIdeal) -> HatIdeal:
    """Î = I + p^-1 [I, L] + ... + p^-(c-1) [I, _(c-1) L] in rescaled coordinates."""
    if (A.d, A.c, A.p) != (ideal.d, ideal.c, ideal.p):
        raise InputError("ideal and hull are over different free algebras")
    if A.E < ideal.E0 + 1:
        raise InputError("hull modulus too small for this ideal")
    p, E0 = A.p, ideal.E0
    F0 = ideal.free
    whole = F0.whole()
    weights = np.array(A.weights)
    layer = ideal.lattice
    rows = []
    layers = []
    for i in range(A.c):
        layers.append(layer)
        H = np.asarray(layer.H, dtype=object)
        if H.shape[0]:
            if np.any(H[:, weights < i + 1] % p**E0 != 0):
                raise HatLemmaViolation(f"layer {i} leaves the weight >= {i + 1} part")
            scale = np.array([p ** max(w - 1 - i, 0) for w in A.weights], dtype=object)
            rows.append(H * scale[None, :])
        layer = bracket_span(layer, whole)
    rows.append(np.eye(A.rank, dtype=object) * p**E0)
    hat_I = Sublattice(A.algebra, np.vstack(rows))
    out = HatIdeal(A, hat_I, layers)
    if not out.lemma_holds():
        raise HatLemmaViolation("[Î, L̂] is not contained in pÎ")
    return out


@dataclass
class HatQuotient:
    algebra: FiniteLieAlgebra
    projection: Morphism
    lifts: np.ndarray
    witness: OmegaWitness
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def hat_quotient(A: ScaledFreeAlgebra, hat_I: HatIdeal) -> HatQuotient:
    L_hat = A.algebra
    I = hat_I.lattice
    Q, proj, lifts = quotient(L_hat, I, validate=False, require_ideal=False)
    cover, cproj, clifts = quotient(L_hat, I.scaled(1), validate=False, require_ideal=False)
    phi = Morphism(cover, Q, proj.apply_many(clifts) if cover.n else np.zeros((0, Q.n)), check=False)
    witness = OmegaWitness(cover, phi, Q.whole())
    checks = {
        "hat-powerful": is_powerful(L_hat),
        "hat-ideal-lemma": hat_I.lemma_holds(),
        "quotient-powerful": is_powerful(Q),
        "quotient-p-central": is_p_central(Q),
    }
    w = witness.checks()
    checks.update({f"omega-witness:{k}": v for k, v in w.items()})
    img_I = Sublattice(cover, cproj.apply_many(I.H)) if cover.n else cover.zero_sub()
    checks["omega1-cover-equals-hat-ideal"] = img_I == omega_1(cover)
    return HatQuotient(Q, proj, lifts, witness, checks)


# ---------------------------------------------------------------------------
# the structure pipeline


@dataclass
class StructureReport:
    d: int
    c: int
    p: int
    ideal: FreeIdeal
    hat: ScaledFreeAlgebra
    hat_ideal: HatIdeal
    algebra: FiniteLieAlgebra
    to_algebra: Morphism
    to_algebra_lifts: np.ndarray
    natural_map: Morphism
    kernel: Sublattice
    quotient_by_kernel: FiniteLieAlgebra
    embedding: Morphism
    hat_quotient: HatQuotient
    image: Sublattice
    quantities: dict
    verdicts: dict

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


def structure_pipeline(d: int, c: int, p: int, generators, ideal: FreeIdeal | None = None) -> StructureReport:
    ideal = ideal or free_ideal(d, c, p, generators)
    E0 = ideal.E0
    A = build_hat_algebra(d, c, p, E0 + c)
    F0 = ideal.free
    L, projL, liftsL = quotient(F0, ideal.lattice, validate=False)
    hat_I = build_hat_ideal(A, ideal)
    hq = hat_quotient(A, hat_I)
    Q = hq.algebra

    # phi: L -> L̂/Î, a + I -> a + Î
    lifted = A.include_rows(liftsL) if L.n else np.zeros((0, A.rank), dtype=object)
    phi = Morphism(L, Q, hq.projection.apply_many(lifted) if L.n else np.zeros((0, Q.n)), check=False)
    J = phi.kernel()
    LJ, projJ, liftsJ = quotient(L, J, validate=False)
    emb = Morphism(LJ, Q, phi.apply_many(liftsJ) if LJ.n else np.zeros((0, Q.n)), check=False)
    image = phi.image()

    # independent route: (L_c ∩ Î)/I inside the hull
    Lc_in_hat = Sublattice(A.algebra, A.include_rows(np.eye(A.rank, dtype=object)))
    I_full = np.vstack([np.asarray(ideal.lattice.H, dtype=object), np.eye(A.rank, dtype=object) * p**E0])
    I_in_hat = Sublattice(A.algebra, A.include_rows(I_full))
    meet = Lc_in_hat & hat_I.lattice
    J_exp_lattice = meet.order_exponent - I_in_hat.order_exponent
    join_index_exp = (Lc_in_hat + hat_I.lattice).order_exponent - hat_I.lattice.order_exponent

    r = A.rank
    bound_exp = (c - 1) * r
    image_index_exp = Q.order_exponent - image.order_exponent
    q = {
        "log_p |L|": L.order_exponent,
        "log_p |J|": J.order_exponent,
        "log_p |image|": image.order_exponent,
        "log_p |hat quotient|": Q.order_exponent,
        "log_p image index": image_index_exp,
        "log_p |hat : free|": index_exponent_hat_over_free(A),
        "hat rank": r,
        "hat rank bound": witt_sum_bound(d, c),
        "log_p bound": bound_exp,
        "E0": E0,
    }
    v = dict(hq.checks)
    v.update({
        "phi-well-defined": phi.is_well_defined() and I_in_hat <= hat_I.lattice,
        "phi-bracket-preserving": phi.is_bracket_preserving(),
        "kernel-matches-lattice-intersection": J.order_exponent == J_exp_lattice,
        "image-matches-lattice-sum": image.order_exponent == join_index_exp,
        "embedding-injective": emb.kernel().is_zero(),
        "embedding-bracket-preserving": emb.is_bracket_preserving(),
        "exact-sequence-orders": L.order_exponent == J.order_exponent + image.order_exponent,
        "bound-kernel-order": J.order_exponent <= bound_exp,
        "bound-image-index": image_index_exp <= index_exponent_hat_over_free(A) <= bound_exp,
        "bound-hat-rank": r <= witt_sum_bound(d, c),
    })
    if not (v["embedding-injective"] and v["embedding-bracket-preserving"]):
        raise EmbeddingFailure("L/J does not embed into the hat quotient")
    return StructureReport(d, c, p, ideal, A, hat_I, L, projL, liftsL, phi, J, LJ, emb, hq, image, q, v)


def random_free_ideal_generators(d: int, c: int, p: int, rng, depth: int = 2, extra: int = 3):
    """Generators of a random finite-index ideal inside pL + [L, L].

    The ideal contains p^k L; the extra vectors have their weight-one
    coordinates divisible by p, so the quotient keeps d generators.
    """
    basis = hall_basis(d, c)
    r = len(basis)
    k = int(rng.integers(1, depth + 1))
    gens = [[p**k if i == j else 0 for j in range(r)] for i in range(r)]
    for _ in range(int(rng.integers(0, extra + 1))):
        vec = [int(x) for x in rng.integers(0, p**k, size=r)]
        vec = [x * p if h.weight == 1 else x for x, h in zip(vec, basis)]
        gens.append(vec)
    return gens
