"""Groups exp(L) for nilpotent algebras of class below p.

The carrier of exp(L) is the additive set of L; the product is the BCH series
evaluated in L.  Group-side constructions here (closures, power subgroups,
commutator series, normality) use only the group law, so that comparing them
with the Lie side is a genuine check of the correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bch_engine import BchEvaluator
from .errors import (
    ClassTooHigh,
    InternalInvariantBreach,
    KernelNotCp,
    PresentationFailure,
    TooLargeForExhaustive,
)
from .hat_construction import free_algebra, hall_basis, free_ideal, structure_pipeline, witt_sum_bound
from .lie_core import (
    DEFAULT_EXHAUSTIVE_EXPONENT,
    FiniteLieAlgebra,
    FreePresentation,
    Morphism,
    Sublattice,
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
from .padic_arith import arith_dtype, solve_left_array

DEFAULT_ELEMENT_CAP = 5**7


class LazardGroup:
    def __init__(self, algebra: FiniteLieAlgebra, element_cap: int = DEFAULT_ELEMENT_CAP):
        cls = nilpotency_class(algebra)
        if cls >= algebra.p:
            raise ClassTooHigh(f"class {cls} is not below p = {algebra.p}")
        self.algebra = algebra
        self.p = algebra.p
        self.nilpotency_class = cls
        self.ev = BchEvaluator(algebra, cls)
        self.element_cap = element_cap

    @property
    def order(self) -> int:
        return self.algebra.order

    @property
    def n(self) -> int:
        return self.algebra.n

    def identity(self):
        return np.zeros(self.n, dtype=self.algebra.dtype)

    def mul(self, X, Y):
        return self.ev.multiply_many(X, Y)

    def inv(self, X):
        return self.algebra.reduce(-np.asarray(X, dtype=object))

    def power(self, X, k: int):
        return self.ev.power_many(X, k)

    def commutator(self, X, Y):
        return self.ev.commutator_many(X, Y)

    def conjugate(self, X, G):
        """g^-1 x g, row-wise."""
        return self.mul(self.mul(self.inv(G), X), G)

    def multiply(self, x, y):
        return self.ev.multiply(x, y)

    def elements(self):
        if self.order > self.element_cap:
            raise TooLargeForExhaustive(f"|G| = {self.order} exceeds element cap {self.element_cap}")
        return self.algebra.whole().elements()

    def random_elements(self, rng, m: int):
        cols = [rng.integers(0, int(o), size=m) for o in self.algebra.order_vec]
        return np.stack(cols, axis=1).astype(self.algebra.dtype) if cols else np.zeros((m, 0), dtype=np.int64)

    def encode(self, X):
        """Mixed-radix integer code per row (for set operations)."""
        X = np.asarray(X, dtype=object)
        code = np.zeros(X.shape[0], dtype=object)
        for i, o in enumerate(self.algebra.order_vec):
            code = code * int(o) + X[:, i]
        dt = arith_dtype(self.order, 1)
        return code.astype(dt)

    def whole(self) -> "Subgroup":
        return Subgroup(self, self.algebra.whole())

    def trivial(self) -> "Subgroup":
        return Subgroup(self, self.algebra.zero_sub())

    def __repr__(self):
        return f"<LazardGroup order={self.p}^{self.algebra.order_exponent} class={self.nilpotency_class}>"


def exp_group(L: FiniteLieAlgebra, **kw) -> LazardGroup:
    return LazardGroup(L, **kw)


def log_algebra(G: LazardGroup) -> FiniteLieAlgebra:
    return G.algebra


@dataclass
class Subgroup:
    parent: LazardGroup
    carrier: Sublattice
    exact: bool = True

    @property
    def order(self) -> int:
        return self.carrier.order

    @property
    def order_exponent(self) -> int:
        return self.carrier.order_exponent

    def generators(self):
        return self.carrier.H

    def as_group(self) -> "tuple[LazardGroup, Morphism]":
        K, emb = subalgebra_as_algebra(self.carrier)
        return LazardGroup(K, self.parent.element_cap), emb

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.carrier == other.carrier

    def __le__(self, other):
        return self.carrier <= other.carrier


def group_axioms(G: LazardGroup, rng, samples: int = 1000, exhaustive_order: int = 3**5) -> dict:
    """Identity, inverses and associativity; exhaustive up to ``exhaustive_order``."""
    out = {}
    small = G.order <= exhaustive_order
    X = G.elements() if G.order <= G.element_cap else G.random_elements(rng, samples)
    Z = np.zeros_like(X)
    out["identity"] = bool(np.all(G.mul(X, Z) == X) and np.all(G.mul(Z, X) == X))
    out["inverse"] = bool(np.all(G.mul(X, G.inv(X)) == 0) and np.all(G.mul(G.inv(X), X) == 0))
    if small:
        out["associativity"] = _associative(multiplication_table(G, X))
    else:
        a, b, c = (G.random_elements(rng, samples) for _ in range(3))
        out["associativity"] = bool(np.array_equal(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c))))
    a, b = G.random_elements(rng, samples), G.random_elements(rng, samples)
    out["inverse-of-product"] = bool(np.array_equal(G.inv(G.mul(a, b)), G.mul(G.inv(b), G.inv(a))))
    out["power-is-scalar-multiple"] = bool(np.array_equal(G.power(a, G.p), G.algebra.reduce(np.asarray(a, dtype=object) * G.p)))
    return out


def multiplication_table(G: LazardGroup, X):
    """``T[i, j]`` = index of X[i] * X[j] in X (X must be closed)."""
    m = X.shape[0]
    codes = G.encode(X)
    order = np.argsort(codes)
    prods = G.mul(np.repeat(X, m, axis=0), np.tile(X, (m, 1)))
    pc = G.encode(prods)
    pos = np.searchsorted(codes[order], pc)
    pos = np.minimum(pos, m - 1)
    if not np.array_equal(codes[order][pos], pc):
        raise InternalInvariantBreach("element set is not closed under the product")
    return order[pos].reshape(m, m)


def _associative(T) -> bool:
    m = T.shape[0]
    for i in range(m):
        left = T[T[i]]  # (x_i x_j) x_k
        right = T[i][T]  # x_i (x_j x_k)
        if not np.array_equal(left, right):
            return False
    return True


# ---------------------------------------------------------------------------
# closures


def group_closure_elements(G: LazardGroup, S, cap: int | None = None):
    """Elements of <S> by breadth-first multiplication, without any lattice help."""
    cap = cap or G.element_cap
    S = np.asarray(S, dtype=object).reshape(-1, G.n)
    S = G.algebra.reduce(S)
    gens = np.vstack([S, G.inv(S)]) if S.shape[0] else S
    seen_codes = set(G.encode(G.identity()[None, :]).tolist())
    found = [G.identity()[None, :].astype(G.algebra.dtype)]
    frontier = found[0]
    while frontier.shape[0] and gens.shape[0]:
        m = frontier.shape[0]
        k = gens.shape[0]
        prods = G.mul(np.repeat(frontier, k, axis=0), np.tile(gens, (m, 1)))
        codes = G.encode(prods)
        _, idx = np.unique(codes, return_index=True)
        new = [i for i in idx.tolist() if int(codes[i]) not in seen_codes]
        if not new:
            break
        seen_codes.update(int(codes[i]) for i in new)
        frontier = prods[new]
        found.append(frontier)
        if len(seen_codes) > cap:
            raise TooLargeForExhaustive(f"subgroup exceeds element cap {cap}")
    return np.vstack(found)


def _lattice_closure(G: LazardGroup, K: Sublattice, extra=None) -> Sublattice:
    """Smallest sublattice containing K closed under products of generator pairs.

    ``extra(H)`` may add further elements per round (e.g. conjugates).
    """
    while True:
        H = K.H
        m = H.shape[0]
        adds = []
        if m:
            adds.append(G.mul(np.repeat(H, m, axis=0), np.tile(H, (m, 1))))
        if extra is not None:
            e = extra(K)
            if e is not None and len(e):
                adds.append(e)
        nxt = K.with_elements(np.vstack(adds)) if adds else K
        if nxt == K:
            return K
        K = nxt


def _spanning_subset(G: LazardGroup, S):
    """Rows of S, chosen greedily, with the same additive span as S."""
    S = np.asarray(S, dtype=object).reshape(-1, G.n)
    chosen = []
    cur = G.algebra.zero_sub()
    while True:
        out = np.nonzero(~cur.contains_many(S))[0] if S.shape[0] else []
        if not len(out):
            return np.asarray(chosen, dtype=object).reshape(-1, G.n)
        chosen.append(S[out[0]])
        cur = cur.with_elements([S[out[0]]])
        S = S[out[1:]]


def _validate_closed(G: LazardGroup, K: Sublattice, S, rng_seed: int = 0, samples: int = 200) -> bool:
    """Exact when small (BFS equals carrier), sampled otherwise."""
    if K.order <= G.element_cap:
        # <T> = K for T ⊆ S gives K ⊆ <S>; closure of K itself gives <S> ⊆ K
        if not K.contains_many(S).all():
            raise InternalInvariantBreach("closure lost a generator")
        elems = group_closure_elements(G, _spanning_subset(G, S))
        if elems.shape[0] != K.order or not K.contains_many(elems).all():
            raise InternalInvariantBreach("lattice closure is not the generated subgroup")
        return True
    rng = np.random.default_rng(rng_seed)
    W, exps, _, _ = K.abelian_basis()
    coeff = [rng.integers(0, G.p**f, size=samples) for f in exps]
    pts = G.algebra.reduce(sum(np.outer(c, w) for c, w in zip(coeff, np.asarray(W, dtype=object))))
    pts2 = pts[rng.permutation(samples)]
    if not K.contains_many(G.mul(pts, pts2)).all():
        raise InternalInvariantBreach("lattice closure is not closed under products")
    return False


def subgroup_generated(G: LazardGroup, S, validate: bool = True) -> Subgroup:
    if G.n == 0:
        return G.trivial()
    S = np.asarray(S, dtype=object).reshape(-1, G.n)
    K = _lattice_closure(G, Sublattice(G.algebra, S))
    exact = _validate_closed(G, K, S) if validate else False
    return Subgroup(G, K, exact)


def normal_closure(G: LazardGroup, S, validate: bool = True) -> Subgroup:
    if G.n == 0:
        return G.trivial()
    S = np.asarray(S, dtype=object).reshape(-1, G.n)
    basis = np.eye(G.n, dtype=object)

    def conj(K):
        H = K.H
        m = H.shape[0]
        if not m:
            return None
        gens = G.algebra.reduce(basis)
        k = gens.shape[0]
        return G.conjugate(np.repeat(H, k, axis=0), np.tile(gens, (m, 1)))

    K = _lattice_closure(G, Sublattice(G.algebra, S), conj)
    exact = _validate_closed(G, K, S) if validate else False
    return Subgroup(G, K, exact)


def is_normal(G: LazardGroup, K: Subgroup) -> bool:
    H = K.carrier.H
    if not H.shape[0]:
        return True
    gens = G.algebra.reduce(np.eye(G.n, dtype=object))
    m, k = H.shape[0], gens.shape[0]
    conj = G.conjugate(np.repeat(H, k, axis=0), np.tile(gens, (m, 1)))
    return bool(K.carrier.contains_many(conj).all())


def gp_power_subgroup(G: LazardGroup, rng_seed: int = 0, samples: int = 400) -> Subgroup:
    """G^p, generated by all p-th powers (every element when |G| is under the cap)."""
    if G.order <= G.element_cap:
        X = G.elements()
        exact = True
    else:
        rng = np.random.default_rng(rng_seed)
        X = np.vstack([G.algebra.reduce(np.eye(G.n, dtype=object)), G.random_elements(rng, samples)])
        exact = False
    P = G.power(X, G.p)
    sub = subgroup_generated(G, P)
    return Subgroup(G, sub.carrier, exact and sub.exact)


def omega_1_group(G: LazardGroup) -> Subgroup:
    X = G.elements()
    P = G.power(X, G.p)
    of_order_p = X[np.all(P == 0, axis=1)]
    return subgroup_generated(G, of_order_p)


def gamma_i_group(G: LazardGroup, i: int) -> Subgroup:
    """i-th term of the lower central series, by commutators and normal closure."""
    cur = G.whole()
    basis = G.algebra.reduce(np.eye(G.n, dtype=object))
    for _ in range(i - 1):
        H = cur.carrier.H
        m, k = H.shape[0], basis.shape[0]
        if not m:
            return cur
        comms = G.commutator(np.repeat(H, k, axis=0), np.tile(basis, (m, 1)))
        cur = normal_closure(G, comms)
    return cur


def group_lower_central_series(G: LazardGroup) -> list[Subgroup]:
    out = [G.whole()]
    i = 2
    while out[-1].order > 1:
        out.append(gamma_i_group(G, i))
        if out[-1] == out[-2]:
            raise InternalInvariantBreach("group lower central series does not terminate")
        i += 1
    return out


def group_class(G: LazardGroup) -> int:
    return len(group_lower_central_series(G)) - 1


def is_powerful_group(G: LazardGroup) -> bool:
    return gamma_i_group(G, 2) <= gp_power_subgroup(G)


def is_p_central_group(G: LazardGroup) -> bool:
    om = omega_1_group(G).carrier.H
    if not om.shape[0]:
        return True
    basis = G.algebra.reduce(np.eye(G.n, dtype=object))
    m, k = om.shape[0], basis.shape[0]
    comm = G.commutator(np.repeat(om, k, axis=0), np.tile(basis, (m, 1)))
    return not bool(np.any(comm != 0))


def group_frattini_rank(G: LazardGroup) -> int:
    """d(G) = log_p |G : G^p [G, G]|, computed on the group side."""
    S = gp_power_subgroup(G).carrier + gamma_i_group(G, 2).carrier
    Phi = subgroup_generated(G, S.H)
    return G.algebra.order_exponent - Phi.order_exponent


# ---------------------------------------------------------------------------
# correspondence dictionary


def correspondence_checks(L: FiniteLieAlgebra, rng, test_sublattices=None, samples: int = 300) -> dict:
    """Properties (a)-(f) of the Lazard dictionary as exact equalities."""
    G = LazardGroup(L)
    out = {}
    whole = L.whole()
    if test_sublattices is None:
        test_sublattices = _sample_sublattices(L, rng)
    normal_ok, quotient_ok = True, True
    for S in test_sublattices:
        sub = subalgebra_generated(S)
        K = subgroup_generated(G, sub.H)
        if K.carrier != sub:
            normal_ok = False
        if is_normal(G, K) != is_ideal(sub):
            normal_ok = False
        if is_ideal(sub):
            Q, proj, _ = quotient(L, sub, validate=False)
            if Q.n:
                GQ = LazardGroup(Q)
                x, y = G.random_elements(rng, samples), G.random_elements(rng, samples)
                lhs = proj.apply_many(G.mul(x, y))
                rhs = GQ.mul(proj.apply_many(x), proj.apply_many(y))
                if not np.array_equal(np.asarray(lhs, dtype=object), np.asarray(rhs, dtype=object)) or proj.kernel() != sub:
                    quotient_ok = False
    out["a:normal-iff-ideal"] = normal_ok
    out["a:quotient-compatible"] = quotient_ok
    out["b:omega1"] = omega_1_group(G).carrier == omega_1(L)
    out["b:power-subgroup"] = gp_power_subgroup(G).carrier == p_multiple(L)
    gs = group_lower_central_series(G)
    ls = lower_central_series(L)
    out["c:class"] = len(gs) == len(ls) and all(a.carrier == b for a, b in zip(gs, ls))
    out["d:powerful"] = is_powerful_group(G) == is_powerful(L)
    out["e:p-central"] = is_p_central_group(G) == is_p_central(L)
    gen_ok = True
    for _ in range(4):
        k = int(rng.integers(1, 4))
        S = G.random_elements(rng, k)
        grp = group_closure_elements(G, S)
        lie = subalgebra_generated(Sublattice(L, S))
        if grp.shape[0] != lie.order or not lie.contains_many(grp).all():
            gen_ok = False
        if (grp.shape[0] == G.order) != lie.is_whole():
            gen_ok = False
    out["f:generation"] = gen_ok
    return out


def _sample_sublattices(L: FiniteLieAlgebra, rng, k: int = 6):
    out = [L.zero_sub(), L.whole(), omega_1(L), p_multiple(L)]
    out += lower_central_series(L)[1:]
    for _ in range(k):
        m = int(rng.integers(1, 3))
        rows = [[int(rng.integers(0, int(o))) for o in L.order_vec] for _ in range(m)]
        out.append(Sublattice(L, rows))
    return out


# ---------------------------------------------------------------------------
# G^p is powerful, p-central, with the Omega extension property


@dataclass
class PowerReport:
    verdicts: dict
    power_subgroup: Subgroup
    cover: object

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


def gp_is_powerful_pcentral_omegaep(G: LazardGroup) -> PowerReport:
    L = G.algebra
    P = gp_power_subgroup(G)
    K, emb = subalgebra_as_algebra(P.carrier)
    cov = omega_extension_cover(FreePresentation.from_algebra(L))
    v = {
        "power-subgroup-is-pL": P.carrier == p_multiple(L),
        "powerful": is_powerful(K),
        "p-central": is_p_central(K),
        "omega-extension": cov.witness.verify() and cov.omega_matches_relations and cov.witness.image == P.carrier,
    }
    if K.n and K.order <= G.element_cap:
        GP = LazardGroup(K)
        v["powerful-group-side"] = is_powerful_group(GP)
        v["p-central-group-side"] = is_p_central_group(GP)
    return PowerReport(v, P, cov)


# ---------------------------------------------------------------------------
# extensions and the Carlson subgroup


@dataclass
class Extension:
    G: LazardGroup
    N: Subgroup
    Q: LazardGroup
    projection: Morphism

    def checks(self, rng, samples: int = 200) -> dict:
        x, y = self.G.random_elements(rng, samples), self.G.random_elements(rng, samples)
        f = self.projection
        lhs = f.apply_many(self.G.mul(x, y))
        rhs = self.Q.mul(f.apply_many(x), f.apply_many(y))
        return {
            "normal": is_normal(self.G, self.N),
            "surjective": f.image().is_whole(),
            "kernel": f.kernel() == self.N.carrier,
            "homomorphism": bool(np.array_equal(np.asarray(lhs, dtype=object), np.asarray(rhs, dtype=object))),
        }


def extension_from_normal(G: LazardGroup, N: Subgroup) -> Extension:
    Q, proj, _ = quotient(G.algebra, N.carrier, validate=False)
    return Extension(G, N, LazardGroup(Q), proj)


def rank_upper_bound(G: LazardGroup, max_exponent: int = DEFAULT_EXHAUSTIVE_EXPONENT):
    """Sectional rank when enumeration is feasible, else log_p |G : G^p|.

    For class below p every subgroup H has d(H) <= log_p |H : H^p| and
    |H : H^p| = |Omega_1(H)| <= |Omega_1(G)| = |G : G^p|.
    """
    L = G.algebra
    if L.order_exponent <= max_exponent:
        return int(rank_sectional(L, max_exponent=max_exponent, allow_bound=False).value), True
    return L.order_exponent - p_multiple(L).order_exponent, False


@dataclass
class CarlsonReport:
    B: Subgroup
    verdicts: dict
    quantities: dict

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


def carlson_subgroup(ext: Extension, A: Subgroup, c: int | None = None, r: int | None = None) -> CarlsonReport:
    """B = (pi^-1(A))^(p^2) with its predicates and the index inequality."""
    G, p = ext.G, ext.G.p
    if ext.N.order != p:
        raise KernelNotCp(f"extension kernel has order {ext.N.order}, expected {p}")
    A_alg, _ = subalgebra_as_algebra(A.carrier)
    cA = nilpotency_class(A_alg) if A_alg.n else 0
    c = cA if c is None else c
    if cA > c:
        raise ClassTooHigh(f"A has class {cA} > {c}")
    if c >= p:
        raise ClassTooHigh(f"class {c} is not below p = {p}")
    C = ext.projection.preimage(A.carrier)
    Cgrp = Subgroup(G, C)
    CG, embC = Cgrp.as_group()
    D = gp_power_subgroup(CG)
    DG, embD = D.as_group()
    Bsub = gp_power_subgroup(DG)
    B_alg, embB = subalgebra_as_algebra(Bsub.carrier)
    # carriers inside G
    D_in_G = Sublattice(G.algebra, embC.apply_many(D.carrier.H)) if D.carrier.H.shape[0] else G.algebra.zero_sub()
    B_rows = embC.apply_many(embD.apply_many(Bsub.carrier.H)) if Bsub.carrier.H.shape[0] else np.zeros((0, G.n))
    B_in_G = Sublattice(G.algebra, B_rows)
    if r is None:
        r, r_exact = rank_upper_bound(G)
    else:
        r_exact = False
    idx_G_B = G.algebra.order_exponent - B_in_G.order_exponent
    idx_Q_A = ext.Q.algebra.order_exponent - A.order_exponent
    D_alg, _ = subalgebra_as_algebra(D_in_G)
    cov = omega_extension_cover(FreePresentation.from_algebra(D_alg)) if D_alg.n else None
    classB = nilpotency_class(B_alg) if B_alg.n else 0
    v = {
        "preimage-is-subgroup": C == subgroup_generated(G, C.H).carrier,
        "B-class-at-most-c": classB <= c,
        "B-powerful": is_powerful(B_alg),
        "B-p-central": is_p_central(B_alg),
        "B-omega-extension": True if cov is None else (cov.witness.verify() and cov.witness.image == p_multiple(D_alg)),
        "B-equals-p2-C": B_in_G == C.scaled(2),
        "index-bound": idx_G_B <= 2 * c * r + idx_Q_A,
    }
    q = {
        "log_p |G:B|": idx_G_B,
        "log_p |Q:A|": idx_Q_A,
        "class c": c,
        "rank r": r,
        "rank exact": int(r_exact),
        "log_p bound": 2 * c * r + idx_Q_A,
        "log_p |C|": C.order_exponent,
        "log_p |B|": B_in_G.order_exponent,
    }
    return CarlsonReport(Subgroup(G, B_in_G), v, q)


# ---------------------------------------------------------------------------
# group structure theorem


def invert_isomorphism(f: Morphism) -> Morphism:
    S, T = f.source, f.target
    Ec = max(S.E, T.E, 1)
    p = S.p
    q = p**Ec
    scale = np.array([p ** (Ec - e) for e in T.orders], dtype=object)
    F = (np.asarray(f.matrix, dtype=object) * scale[None, :]) % q
    dt = arith_dtype(q, 64 * max(S.n + T.n, 1))
    rows = []
    for i in range(T.n):
        b = np.zeros(T.n, dtype=object)
        b[i] = scale[i]
        x = solve_left_array(F.astype(dt), b.astype(dt), p, Ec)
        if x is None:
            raise PresentationFailure("map is not surjective")
        rows.append(np.asarray(x, dtype=object))
    return Morphism(T, S, np.asarray(rows, dtype=object).reshape(T.n, S.n), check=False)


def minimal_generators(L: FiniteLieAlgebra):
    """Lifts of a basis of L/(pL + [L, L])."""
    Phi = frattini(L.whole())
    Q, _, lifts = quotient(L, Phi, validate=False)
    return np.asarray(lifts, dtype=object)


def presentation_map(L: FiniteLieAlgebra, gens, c: int) -> Morphism:
    """L_c(X) mod p^E -> L sending x_i to gens[i]; Hall monomials by iterated brackets."""
    d = len(gens)
    basis = hall_basis(d, c)
    F = free_algebra(d, c, L.p, L.E)
    vals = [None] * len(basis)
    for h in basis:
        if h.is_generator:
            vals[h.position] = L.reduce(np.asarray([gens[h.gen - 1]], dtype=object))[0]
        else:
            vals[h.position] = L.bracket_vec(vals[h.left.position], vals[h.right.position])
    return Morphism(F, L, np.asarray(vals, dtype=object).reshape(len(basis), L.n), check=False)


@dataclass
class GroupStructureReport:
    N: Subgroup
    structure: object
    iso: Morphism
    group_map: Morphism
    verdicts: dict
    quantities: dict

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


def group_structure_pipeline(G: LazardGroup, generators=None, rng=None, samples: int = 100) -> GroupStructureReport:
    L = G.algebra
    p = G.p
    rng = rng or np.random.default_rng(0)
    c = max(G.nilpotency_class, 1)
    gens = minimal_generators(L) if generators is None else np.asarray(generators, dtype=object)
    if gens.shape[0] == 0:
        gens = np.zeros((1, L.n), dtype=object)
    psi = presentation_map(L, gens, c)
    if not psi.image().is_whole():
        if generators is None:
            raise PresentationFailure("generator images do not generate the algebra")
        return group_structure_pipeline(G, None, rng, samples)
    d = gens.shape[0]
    K = psi.kernel()
    r = len(hall_basis(d, c))
    ideal_gens = [list(map(int, row)) for row in np.asarray(K.H, dtype=object)]
    ideal_gens += [[p**L.E if i == j else 0 for j in range(r)] for i in range(r)]
    ideal = free_ideal(d, c, p, ideal_gens)
    rep = structure_pipeline(d, c, p, ideal_gens, ideal=ideal)
    M = rep.algebra
    # theta: L_c(X)/I -> log G
    liftsM = rep.to_algebra_lifts
    theta = Morphism(M, L, psi.apply_many(np.asarray(liftsM, dtype=object) % p**L.E) if M.n else np.zeros((0, L.n)), check=False)
    iso_ok = theta.kernel().is_zero() and theta.image().is_whole() and theta.is_bracket_preserving()
    theta_inv = invert_isomorphism(theta)
    N = Sublattice(L, theta.apply_many(rep.kernel.H)) if rep.kernel.H.shape[0] else L.zero_sub()
    Qhat = rep.hat_quotient.algebra
    phi_rows = theta_inv.apply_many(np.eye(L.n, dtype=object))
    phiM = rep.natural_map
    mu = Morphism(L, Qhat, phiM.apply_many(phi_rows) if L.n else np.zeros((0, Qhat.n)), check=False)
    x, y = G.random_elements(rng, samples), G.random_elements(rng, samples)
    if Qhat.n:
        GQ = LazardGroup(Qhat)
        mult = bool(np.array_equal(np.asarray(mu.apply_many(G.mul(x, y)), dtype=object),
                                   np.asarray(GQ.mul(mu.apply_many(x), mu.apply_many(y)), dtype=object)))
    else:
        mult = True
    v = dict(rep.verdicts)
    bound_exp = rep.quantities["log_p bound"]
    Nsub = Subgroup(G, N)
    v.update({
        "presentation-isomorphism": iso_ok,
        "N-normal": is_normal(G, Nsub),
        "group-map-kernel-is-N": mu.kernel() == N,
        "group-map-multiplicative": mult,
        "bound-a-N-order": N.order_exponent <= bound_exp,
        "bound-b-embedding": mu.kernel() == N and mult,
        "bound-c-index": rep.quantities["log_p image index"] <= bound_exp,
    })
    q = dict(rep.quantities)
    q.update({"d": d, "c": c, "log_p |N|": N.order_exponent, "log_p |G|": L.order_exponent})
    return GroupStructureReport(Nsub, rep, theta, mu, v, q)


@dataclass
class RankBoundReport:
    verdicts: dict
    quantities: dict

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


def rank_bound_check(G: LazardGroup, max_exponent: int = DEFAULT_EXHAUSTIVE_EXPONENT) -> RankBoundReport:
    L = G.algebra
    p = G.p
    d = min_generators(L)
    bound = sum(d**i for i in range(1, p))
    P = gp_power_subgroup(G)
    idx = L.order_exponent - P.order_exponent
    om = omega_1_group(G) if G.order <= G.element_cap else None
    v = {"power-index-bound": idx <= bound}
    if om is not None:
        v["regular-power-index-equals-omega1"] = idx == om.order_exponent
    q = {"d": d, "log_p |G:G^p|": idx, "log_p bound": bound}
    if L.order_exponent <= max_exponent:
        sr = rank_sectional(L, max_exponent=max_exponent, allow_bound=False)
        q["sectional rank"] = sr.value
        v["sectional-rank-bound"] = sr.value <= bound
        v["sectional-rank-at-most-power-index"] = sr.value <= idx
    q["additive rank"] = L.whole().additive_rank()
    return RankBoundReport(v, q)
