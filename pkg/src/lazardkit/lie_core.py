"""Finite nilpotent Z_p-Lie algebras given by structure constants.

An algebra has basis ``b_0..b_{n-1}`` where ``b_i`` has additive order
``p^{e_i}``.  Working modulus is ``p^E`` with ``E = max(e_i)``.  A sublattice
(additive subgroup) is stored as the Howell form over Z/p^E of its preimage
under ``(Z/p^E)^n -> prod Z/p^{e_i}``; the preimage always contains the
relation rows ``p^{e_i} b_i``, which makes equality of sublattices equality of
arrays and turns sums and intersections into plain row-span operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidLieAlgebra,
    JacobiLiftFailure,
    NotAnIdeal,
    ParentMismatch,
    RelationNotInPM,
    TooLargeForExhaustive,
)
from .padic_arith import (
    Modulus,
    arith_dtype,
    howell_array,
    intersect_arrays,
    kernel_array,
    smith_array,
    solve_left_array,
    span_size_exponent,
    contains_array,
)

DEFAULT_EXHAUSTIVE_EXPONENT = 4
DEFAULT_SUBALGEBRA_CAP = 20000


class FiniteLieAlgebra:
    """Structure constants ``C[i, j, k]`` with ``[b_i, b_j] = sum_k C[i,j,k] b_k``.

    With ``validate=False`` the object is only a bilinear algebra; that is how
    the raw lifted forms of the cover construction are represented before the
    quotient makes them Lie.
    """

    def __init__(self, p: int, orders, constants=None, validate: bool = True,
                 name: str | None = None):
        orders = tuple(int(e) for e in orders)
        if any(e < 1 for e in orders):
            raise InvalidLieAlgebra("basis orders must be positive p-power exponents")
        self.p = p
        self.orders = orders
        self.n = len(orders)
        self.E = max(orders, default=1)
        self.modulus = Modulus(p, self.E)
        self.q = self.modulus.q
        self.dtype = arith_dtype(self.q, 4 * max(self.n, 1) ** 2)
        self.order_vec = np.array([p**e for e in orders], dtype=self.dtype)
        self.name = name
        n = self.n
        C = np.zeros((n, n, n), dtype=object)
        if constants is not None:
            if isinstance(constants, dict):
                for (i, j), vec in constants.items():
                    items = vec.items() if isinstance(vec, dict) else enumerate(vec)
                    for k, c in items:
                        C[i, j, k] = C[i, j, k] + c
            else:
                C = np.array(constants, dtype=object).reshape(n, n, n)
        if n:
            C = C % np.array([p**e for e in orders], dtype=object)[None, None, :]
        self.C = C.astype(self.dtype)
        self.C.flags.writeable = False
        self._Cflat = self.C.reshape(n, n * n) if n else self.C.reshape(0, 0)
        if validate:
            rep = check_axioms(self)
            if not rep.valid:
                raise InvalidLieAlgebra(f"not a Lie algebra: {rep.violations[:5]}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_brackets(cls, p, orders, brackets, validate=True, name=None):
        """``brackets`` maps ``(i, j)`` with ``i < j`` to ``{k: c}``; antisymmetry implied."""
        full = {}
        for (i, j), vec in brackets.items():
            if i == j:
                raise InvalidLieAlgebra("bracket of a basis element with itself")
            vec = dict(vec)
            full[(i, j)] = vec
            full[(j, i)] = {k: -c for k, c in vec.items()}
        return cls(p, orders, full, validate=validate, name=name)

    @classmethod
    def abelian(cls, p, orders):
        return cls(p, orders, None, name="abelian")

    @classmethod
    def heisenberg(cls, p, e=1):
        return cls.from_brackets(p, (e, e, e), {(0, 1): {2: 1}}, name="heisenberg")

    @classmethod
    def free_nilpotent(cls, d, c, p, E, basis=None):
        from .hall_basis import HallBasis

        basis = basis or HallBasis(d, c)
        r = len(basis)
        consts = {}
        for a in range(r):
            for b in range(r):
                vec = basis.pair(a, b)
                if vec:
                    consts[(a, b)] = vec
        return cls(p, (E,) * r, consts, validate=False, name=f"free(d={d},c={c})")

    # -- elements -----------------------------------------------------------

    def reduce(self, X):
        X = np.asarray(X, dtype=object)
        return (X % np.array([self.p**e for e in self.orders], dtype=object)).astype(self.dtype)

    def element(self, coords) -> "LieElement":
        return LieElement(self, coords)

    def zero(self) -> "LieElement":
        return LieElement(self, (0,) * self.n)

    def basis_element(self, i: int, scale: int = 1) -> "LieElement":
        v = [0] * self.n
        v[i] = scale
        return LieElement(self, v)

    @property
    def order(self) -> int:
        return self.p ** sum(self.orders)

    @property
    def order_exponent(self) -> int:
        return sum(self.orders)

    def bracket_many(self, X, Y):
        """Row-wise brackets of two (m, n) arrays."""
        n = self.n
        X = np.asarray(X).astype(self.dtype)
        Y = np.asarray(Y).astype(self.dtype)
        if n == 0 or X.shape[0] == 0:
            return np.zeros((X.shape[0], n), dtype=self.dtype)
        T = (X @ self._Cflat) % self.q
        T = T.reshape(X.shape[0], n, n)
        out = (Y[:, :, None] * T).sum(axis=1)
        return out % self.order_vec

    def bracket_vec(self, x, y):
        return self.bracket_many(np.asarray([x]), np.asarray([y]))[0]

    def bracket_pairs(self, W):
        """``out[a, b] = [W[a], W[b]]`` as an (m, m, n) array."""
        n = self.n
        W = np.asarray(W).astype(self.dtype)
        m = W.shape[0]
        if n == 0 or m == 0:
            return np.zeros((m, m, n), dtype=self.dtype)
        T = ((W @ self._Cflat) % self.q).reshape(m, n, n)
        return np.matmul(W, T) % self.order_vec

    def bracket_with_basis(self, X):
        """All ``[x, b_j]`` for rows x of X, as an (m*n, n) array."""
        n = self.n
        X = np.asarray(X).astype(self.dtype)
        if n == 0 or X.shape[0] == 0:
            return np.zeros((0, n), dtype=self.dtype)
        T = (X @ self._Cflat) % self.q
        return T.reshape(X.shape[0] * n, n) % self.order_vec

    # -- sublattices ----------------------------------------------------------

    def sublattice(self, rows) -> "Sublattice":
        return Sublattice(self, rows)

    def whole(self) -> "Sublattice":
        return Sublattice(self, np.eye(self.n, dtype=object))

    def zero_sub(self) -> "Sublattice":
        return Sublattice(self, np.zeros((0, self.n), dtype=object))

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<FiniteLieAlgebra{tag} p={self.p} orders={self.orders}>"

    def bracket_dict(self):
        """Nonzero structure constants for ``i < j`` as ``{(i, j): {k: c}}``."""
        out = {}
        for i in range(self.n):
            for j in range(i + 1, self.n):
                vec = {k: int(self.C[i, j, k]) for k in range(self.n) if self.C[i, j, k]}
                if vec:
                    out[(i, j)] = vec
        return out


@dataclass(frozen=True)
class LieElement:
    parent: FiniteLieAlgebra
    coords: tuple

    def __post_init__(self):
        red = self.parent.reduce(np.asarray([list(self.coords)], dtype=object)) if self.parent.n else np.zeros((1, 0))
        object.__setattr__(self, "coords", tuple(int(x) for x in red[0]))

    def _check(self, other):
        if not isinstance(other, LieElement) or other.parent is not self.parent:
            raise ParentMismatch("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return LieElement(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return LieElement(self.parent, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return LieElement(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, k: int):
        return LieElement(self.parent, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.coords)

    def __repr__(self):
        return f"LieElement{self.coords}"


def bracket(a: LieElement, b: LieElement) -> LieElement:
    a._check(b)
    return LieElement(a.parent, tuple(int(x) for x in a.parent.bracket_vec(a.coords, b.coords)))


# ---------------------------------------------------------------------------


class Sublattice:
    """Additive subgroup of a finite algebra, in canonical Howell form."""

    __slots__ = ("parent", "H", "pivots", "_basis")

    def __init__(self, parent: FiniteLieAlgebra, rows):
        self.parent = parent
        n = parent.n
        rows = np.asarray(rows, dtype=object).reshape(-1, n) if n else np.zeros((0, 0), dtype=object)
        rel = np.zeros((n, n), dtype=object)
        for i, e in enumerate(parent.orders):
            if e < parent.E:
                rel[i, i] = parent.p**e
        rel = rel[[i for i, e in enumerate(parent.orders) if e < parent.E]]
        allrows = np.vstack([rows, rel]) if len(rel) else rows
        allrows = (allrows % parent.q).astype(parent.dtype)
        self.H, self.pivots = howell_array(allrows, parent.p, parent.E)
        self._basis = None

    @classmethod
    def _from_howell(cls, parent, H, pivots):
        obj = cls.__new__(cls)
        obj.parent = parent
        obj.H = H
        obj.pivots = pivots
        obj._basis = None
        return obj

    @property
    def rows(self):
        return self.H

    @property
    def order_exponent(self) -> int:
        P = self.parent
        rel = sum(P.E - e for e in P.orders)
        return span_size_exponent(self.pivots, P.E) - rel

    @property
    def order(self) -> int:
        return self.parent.p**self.order_exponent

    @property
    def index(self) -> int:
        return self.parent.p ** (self.parent.order_exponent - self.order_exponent)

    def is_zero(self) -> bool:
        return self.order_exponent == 0

    def is_whole(self) -> bool:
        return self.order_exponent == self.parent.order_exponent

    def contains_many(self, V):
        V = np.asarray(V, dtype=object)
        if V.ndim == 1:
            V = V.reshape(1, -1)
        if V.shape[0] == 0:
            return np.zeros(0, dtype=bool)
        V = (V % self.parent.q).astype(self.parent.dtype)
        return contains_array(self.H, self.pivots, V, self.parent.p, self.parent.E)

    def contains(self, v) -> bool:
        if isinstance(v, LieElement):
            v = v.coords
        return bool(self.contains_many(np.asarray([list(v)], dtype=object))[0])

    __contains__ = contains

    def _same(self, other):
        if other.parent is not self.parent:
            raise ParentMismatch("sublattices of different algebras")

    def __le__(self, other: "Sublattice") -> bool:
        self._same(other)
        if self.H.shape[0] == 0:
            return True
        return bool(other.contains_many(self.H).all())

    def __eq__(self, other):
        if not isinstance(other, Sublattice):
            return NotImplemented
        return (
            other.parent is self.parent
            and self.H.shape == other.H.shape
            and bool(np.all(self.H == other.H))
        )

    def __hash__(self):
        return hash((id(self.parent), self.H.tobytes() if self.H.dtype != object else str(self.H.tolist())))

    def __add__(self, other: "Sublattice") -> "Sublattice":
        self._same(other)
        return Sublattice(self.parent, np.vstack([self.H, other.H]))

    def __and__(self, other: "Sublattice") -> "Sublattice":
        self._same(other)
        P = self.parent
        if self.H.shape[0] == 0 or other.H.shape[0] == 0:
            return P.zero_sub()
        H, piv = intersect_arrays(self.H, other.H, P.p, P.E)
        return Sublattice(P, H)

    def scaled(self, k: int = 1) -> "Sublattice":
        """p^k times this sublattice."""
        return Sublattice(self.parent, self.H * (self.parent.p**k))

    def with_elements(self, V) -> "Sublattice":
        return Sublattice(self.parent, np.vstack([self.H, np.asarray(V, dtype=object).reshape(-1, self.parent.n)]))

    def __repr__(self):
        return f"<Sublattice order=p^{self.order_exponent} of {self.parent!r}>"

    # -- abelian group structure ------------------------------------------------

    def abelian_basis(self):
        """``(W, exps)``: S is the direct sum of the cyclic groups <W[t]> of order p^exps[t]."""
        if self._basis is not None:
            return self._basis
        P = self.parent
        G = self.H
        m = G.shape[0]
        if m == 0:
            self._basis = (np.zeros((0, P.n), dtype=P.dtype), [], None, None)
            return self._basis
        scale = np.array([P.p ** (P.E - e) for e in P.orders], dtype=P.dtype)
        Gs = (G * scale) % P.q
        K, _ = kernel_array(Gs, P.p, P.E)
        exps, V, Vinv = smith_array(K if K.shape[0] else np.zeros((0, m), dtype=object), P.p, P.E)
        keep = [t for t in range(m) if exps[t] > 0]
        keep.sort(key=lambda t: -exps[t])
        W = P.reduce(np.asarray(Vinv, dtype=object)[keep] .dot(np.asarray(G, dtype=object)) if keep else np.zeros((0, P.n), dtype=object))
        self._basis = (W, [exps[t] for t in keep], (Gs, V, keep, [exps[t] for t in keep]), None)
        return self._basis

    def additive_rank(self) -> int:
        return len(self.abelian_basis()[1])

    def coordinates(self, v):
        """Coordinates of ``v`` in ``abelian_basis()``; None when v is not in S."""
        P = self.parent
        W, exps, aux, _ = self.abelian_basis()
        if aux is None:
            return [] if not np.any(np.asarray(v, dtype=object) % P.order_vec.astype(object)) else None
        Gs, V, keep, fexp = aux
        scale = np.array([P.p ** (P.E - e) for e in P.orders], dtype=object)
        target = (np.asarray(v, dtype=object) % np.asarray(P.order_vec, dtype=object)) * scale % P.q
        x = solve_left_array(Gs, target.astype(Gs.dtype), P.p, P.E)
        if x is None:
            return None
        y = np.asarray(x, dtype=object).dot(np.asarray(V, dtype=object))
        return [int(y[t]) % P.p**f for t, f in zip(keep, fexp)]

    def elements(self, cap: int | None = None):
        """All elements as an (|S|, n) array (reduced coordinates)."""
        P = self.parent
        W, exps, _, _ = self.abelian_basis()
        size = P.p ** sum(exps)
        if cap is not None and size > cap:
            raise TooLargeForExhaustive(f"sublattice of order {size} exceeds cap {cap}")
        X = np.zeros((1, P.n), dtype=P.dtype)
        for w, f in zip(W, exps):
            mult = np.arange(P.p**f, dtype=P.dtype) if P.dtype != object else np.array(list(range(P.p**f)), dtype=object)
            X = (X[:, None, :] + mult[None, :, None] * np.asarray(w, dtype=P.dtype)[None, None, :]).reshape(-1, P.n)
            X = X % P.order_vec
        return X


def _span(parent: FiniteLieAlgebra, rows) -> Sublattice:
    return Sublattice(parent, rows)


# ---------------------------------------------------------------------------
# validators and predicates


@dataclass
class AxiomReport:
    valid: bool
    violations: list = field(default_factory=list)

    def kinds(self):
        return sorted({v[0] for v in self.violations})


def check_axioms(L: FiniteLieAlgebra) -> AxiomReport:
    """Exhaustive check of antisymmetry, Jacobi and well-definedness (1-based indices)."""
    n = L.n
    viol = []
    if n == 0:
        return AxiomReport(True, [])
    C = L.C
    ordk = L.order_vec
    anti = (C + C.transpose(1, 0, 2)) % ordk[None, None, :]
    for i, j in zip(*np.nonzero(np.any(anti != 0, axis=2))):
        if i <= j:
            viol.append(("antisymmetry", (int(i) + 1, int(j) + 1)))
    # p^{e_i} c_ij^k and p^{e_j} c_ij^k must vanish mod p^{e_k}
    left = (C * ordk[:, None, None]) % ordk[None, None, :]
    right = (C * ordk[None, :, None]) % ordk[None, None, :]
    for i, j in zip(*np.nonzero(np.any((left != 0) | (right != 0), axis=2))):
        viol.append(("well-defined", (int(i) + 1, int(j) + 1)))
    T = np.tensordot(C, C, axes=([2], [0])) % ordk
    J = (T + T.transpose(2, 0, 1, 3) + T.transpose(1, 2, 0, 3)) % ordk
    for i, j, k in zip(*np.nonzero(np.any(J != 0, axis=3))):
        viol.append(("jacobi", (int(i) + 1, int(j) + 1, int(k) + 1)))
    return AxiomReport(not viol, viol)


def bracket_span(A: Sublattice, B: Sublattice) -> Sublattice:
    """The additive span [A, B] of brackets of elements of A and B."""
    A._same(B)
    P = A.parent
    if A.H.shape[0] == 0 or B.H.shape[0] == 0:
        return P.zero_sub()
    if B.is_whole():
        return Sublattice(P, P.bracket_with_basis(A.H))
    m, k = A.H.shape[0], B.H.shape[0]
    X = np.repeat(A.H, k, axis=0)
    Y = np.tile(B.H, (m, 1))
    return Sublattice(P, P.bracket_many(X, Y))


def is_ideal(S: Sublattice) -> bool:
    P = S.parent
    if S.H.shape[0] == 0:
        return True
    return bool(S.contains_many(P.bracket_with_basis(S.H)).all())


def ideal_check(S: Sublattice) -> None:
    if not is_ideal(S):
        raise NotAnIdeal("sublattice is not an ideal")


def is_subalgebra(S: Sublattice) -> bool:
    if S.H.shape[0] == 0:
        return True
    return bracket_span(S, S) <= S


def lower_central_series(L: FiniteLieAlgebra) -> list[Sublattice]:
    series = [L.whole()]
    while not series[-1].is_zero():
        nxt = bracket_span(series[-1], series[0])
        if nxt == series[-1]:
            raise InvalidLieAlgebra("algebra is not nilpotent")
        series.append(nxt)
    return series


def nilpotency_class(L: FiniteLieAlgebra) -> int:
    return len(lower_central_series(L)) - 1


def omega_1(L: FiniteLieAlgebra) -> Sublattice:
    rows = np.zeros((L.n, L.n), dtype=object)
    for i, e in enumerate(L.orders):
        rows[i, i] = L.p ** (e - 1)
    return Sublattice(L, rows)


def p_multiple(L: FiniteLieAlgebra) -> Sublattice:
    return L.whole().scaled(1)


def iterated_bracket_ideal(I: Sublattice, i: int) -> Sublattice:
    """[I, _i L] by i successive closures against the basis."""
    ideal_check(I)
    whole = I.parent.whole()
    cur = I
    for _ in range(i):
        cur = bracket_span(cur, whole)
    return cur


def is_powerful(L: FiniteLieAlgebra) -> bool:
    if L.n == 0:
        return True
    return bracket_span(L.whole(), L.whole()) <= p_multiple(L)


def is_p_central(L: FiniteLieAlgebra) -> bool:
    if L.n == 0:
        return True
    br = L.bracket_with_basis(omega_1(L).H)
    return not bool(np.any(br != 0))


def centre(L: FiniteLieAlgebra) -> Sublattice:
    """Kernel of x -> ([x, b_j])_j."""
    n = L.n
    if n == 0:
        return L.zero_sub()
    # x -> [x, b_j] is linear with matrix rows [b_i, b_j]; stack all j.
    F = np.zeros((n, n * n), dtype=object)
    for i in range(n):
        for j in range(n):
            F[i, j * n:(j + 1) * n] = L.C[i, j]
    return Morphism(L, _tower(L, n), F, check=False).kernel()


def _tower(L: FiniteLieAlgebra, copies: int) -> FiniteLieAlgebra:
    return FiniteLieAlgebra(L.p, L.orders * copies, None, validate=False)


def subalgebra_generated(S, L: FiniteLieAlgebra | None = None) -> Sublattice:
    """Smallest subalgebra containing the given elements (or sublattice)."""
    cur = _as_sublattice(S, L)
    while True:
        nxt = cur + bracket_span(cur, cur)
        if nxt == cur:
            return cur
        cur = nxt


def ideal_closure(S, L: FiniteLieAlgebra | None = None) -> Sublattice:
    cur = _as_sublattice(S, L)
    while True:
        nxt = cur + bracket_span(cur, cur.parent.whole())
        if nxt == cur:
            return cur
        cur = nxt


def _as_sublattice(S, L):
    if isinstance(S, Sublattice):
        return S
    S = list(S)
    if L is None:
        if not S:
            raise ValueError("parent algebra required for an empty generating set")
        L = S[0].parent
    rows = [list(s.coords) if isinstance(s, LieElement) else list(s) for s in S]
    return Sublattice(L, np.asarray(rows, dtype=object).reshape(-1, L.n))


def frattini(S: Sublattice) -> Sublattice:
    """pS + [S, S]."""
    return S.scaled(1) + bracket_span(S, S)


def min_generators(L) -> int:
    """Minimal number of Lie generators: dim_Fp of S/(pS + [S,S])."""
    S = L.whole() if isinstance(L, FiniteLieAlgebra) else L
    return S.order_exponent - frattini(S).order_exponent


@dataclass(frozen=True)
class SectionalRank:
    value: int
    exact: bool

    def __int__(self):
        return self.value


def _canonical_direction(P: FiniteLieAlgebra, v):
    """Representative of {u v : u a unit}; they generate the same Z_p-submodules."""
    for x in v:
        x = int(x)
        if x:
            k = 0
            while x % P.p == 0:
                x //= P.p
                k += 1
            inv = pow(x, -1, P.q)
            return tuple(int(y) for y in (np.asarray(v, dtype=object) * inv) % np.asarray(P.order_vec, dtype=object))
    return tuple(int(y) for y in v)


def enumerate_closed(L: FiniteLieAlgebra, closure, cap: int = DEFAULT_SUBALGEBRA_CAP,
                     max_exponent: int = DEFAULT_EXHAUSTIVE_EXPONENT):
    """All sublattices closed under ``closure``, by breadth-first extension from 0."""
    if L.order_exponent > max_exponent:
        raise TooLargeForExhaustive(
            f"|L| = p^{L.order_exponent} exceeds exhaustive cap p^{max_exponent}"
        )
    elems = L.whole().elements()
    dirs = sorted({_canonical_direction(L, v) for v in elems if np.any(v != 0)})
    dirs = np.asarray(dirs, dtype=object).reshape(-1, L.n)
    start = closure(L.zero_sub())
    found = {_key(start): start}
    queue = [start]
    while queue:
        H = queue.pop()
        outside = dirs[~H.contains_many(dirs)] if len(dirs) else dirs
        for v in outside:
            K = closure(H.with_elements([v]))
            key = _key(K)
            if key not in found:
                found[key] = K
                queue.append(K)
                if len(found) > cap:
                    raise TooLargeForExhaustive(f"more than {cap} closed sublattices")
    return sorted(found.values(), key=lambda S: (S.order_exponent, _key(S)))


def _key(S: Sublattice):
    return tuple(tuple(int(x) for x in row) for row in S.H)


def enumerate_subalgebras(L, **kw):
    return enumerate_closed(L, subalgebra_generated, **kw)


def enumerate_ideals(L, **kw):
    return enumerate_closed(L, ideal_closure, **kw)


def rank_sectional(L: FiniteLieAlgebra, max_exponent: int = DEFAULT_EXHAUSTIVE_EXPONENT,
                   allow_bound: bool = True) -> SectionalRank:
    """max d(H) over subalgebras H; above the cap, the bound d + d^2 + ... + d^(p-1)."""
    if L.n == 0:
        return SectionalRank(0, True)
    try:
        subs = enumerate_subalgebras(L, max_exponent=max_exponent)
    except TooLargeForExhaustive:
        if not allow_bound:
            raise
        d = min_generators(L)
        return SectionalRank(sum(d**i for i in range(1, L.p)), False)
    return SectionalRank(max(min_generators(H) for H in subs), True)


def module_rank(L) -> int:
    """Number of cyclic factors of the additive group."""
    S = L.whole() if isinstance(L, FiniteLieAlgebra) else L
    return S.additive_rank()


def graded_order_profile(L: FiniteLieAlgebra) -> tuple:
    """Exponents of |gamma_i / gamma_{i+1}| along the lower central series."""
    series = lower_central_series(L)
    return tuple(a.order_exponent - b.order_exponent for a, b in zip(series, series[1:]))


# ---------------------------------------------------------------------------
# morphisms and quotients


class Morphism:
    """Additive map given by images of basis elements (row i = image of b_i)."""

    def __init__(self, source: FiniteLieAlgebra, target: FiniteLieAlgebra, matrix,
                 check: bool = True):
        if source.p != target.p:
            raise ParentMismatch("morphism between algebras over different primes")
        self.source = source
        self.target = target
        M = np.asarray(matrix, dtype=object).reshape(source.n, target.n)
        self.matrix = target.reduce(M) if target.n else M
        if check and not self.is_well_defined():
            raise ValueError("map is not well defined on the source orders")

    def apply_many(self, X):
        X = np.asarray(X, dtype=object).reshape(-1, self.source.n)
        if self.target.n == 0:
            return np.zeros((X.shape[0], 0), dtype=object)
        Y = X.dot(np.asarray(self.matrix, dtype=object))
        return self.target.reduce(Y)

    def apply(self, x):
        if isinstance(x, LieElement):
            x = x.coords
        return self.apply_many([list(x)])[0]

    def is_well_defined(self) -> bool:
        for i, e in enumerate(self.source.orders):
            row = np.asarray(self.matrix[i], dtype=object) * self.source.p**e
            if np.any(self.target.reduce(row.reshape(1, -1)) != 0):
                return False
        return True

    def is_bracket_preserving(self) -> bool:
        S, T = self.source, self.target
        n = S.n
        if n == 0:
            return True
        idx = [(i, j) for i in range(n) for j in range(i + 1, n)]
        if not idx:
            return True
        lhs = self.apply_many(np.asarray([S.C[i, j] for i, j in idx], dtype=object))
        M = np.asarray(self.matrix, dtype=object)
        X = np.asarray([M[i] for i, _ in idx], dtype=object)
        Y = np.asarray([M[j] for _, j in idx], dtype=object)
        rhs = T.bracket_many(X.astype(T.dtype), Y.astype(T.dtype))
        return bool(np.all(np.asarray(lhs, dtype=object) == np.asarray(rhs, dtype=object)))

    def image(self, S: Sublattice | None = None) -> Sublattice:
        rows = self.matrix if S is None else self.apply_many(S.H)
        return Sublattice(self.target, rows)

    def kernel(self) -> Sublattice:
        S, T = self.source, self.target
        if S.n == 0:
            return S.zero_sub()
        Ec = max(S.E, T.E)
        p = S.p
        q = p**Ec
        scale = np.array([p ** (Ec - e) for e in T.orders], dtype=object)
        F = (np.asarray(self.matrix, dtype=object) * scale[None, :]) % q if T.n else np.zeros((S.n, 0), dtype=object)
        dt = arith_dtype(q, 64 * max(S.n + T.n, 1))
        if T.n == 0:
            return S.whole()
        K, _ = kernel_array(F.astype(dt), p, Ec)
        return Sublattice(S, np.asarray(K, dtype=object) % S.q)

    def preimage(self, A: Sublattice) -> Sublattice:
        """{x : f(x) in A}, via the kernel of the composite to target/A."""
        Q, proj, _ = quotient(self.target, A, validate=False, require_ideal=False)
        comp = Morphism(self.source, Q, self.apply_many(np.eye(self.source.n, dtype=object)).dot(np.asarray(proj.matrix, dtype=object)) if Q.n else np.zeros((self.source.n, 0)), check=False)
        return comp.kernel()

    def compose(self, after: "Morphism") -> "Morphism":
        """``after`` ∘ ``self``."""
        M = np.asarray(self.matrix, dtype=object).dot(np.asarray(after.matrix, dtype=object)) if after.target.n else np.zeros((self.source.n, 0))
        return Morphism(self.source, after.target, M, check=False)


def quotient(L: FiniteLieAlgebra, I: Sublattice, validate: bool = True, require_ideal: bool = True):
    """``L / I`` on a Smith-diagonal basis.

    Returns ``(Q, projection, lifts)`` where ``lifts[t]`` is a preimage in L of
    the t-th basis element of Q.
    """
    if I.parent is not L:
        raise ParentMismatch("ideal of a different algebra")
    if require_ideal:
        ideal_check(I)
    p, E = L.p, L.E
    n = L.n
    R = I.H if I.H.shape[0] else np.zeros((0, n), dtype=object)
    exps, V, Vinv = smith_array(R, p, E) if n else ([], np.zeros((0, 0)), np.zeros((0, 0)))
    keep = [t for t in range(n) if exps[t] > 0]
    keep.sort(key=lambda t: -exps[t])
    fexp = [exps[t] for t in keep]
    V = np.asarray(V, dtype=object)
    Vinv = np.asarray(Vinv, dtype=object)
    lifts = L.reduce(Vinv[keep]) if keep else np.zeros((0, n), dtype=L.dtype)
    P = V[:, keep] if keep else np.zeros((n, 0), dtype=object)
    m = len(keep)
    consts = {}
    if m:
        fvec = np.array([p**f for f in fexp], dtype=L.dtype)
        br = L.bracket_pairs(lifts).reshape(m * m, n)
        br = (br @ (P % L.q).astype(L.dtype)) % fvec
        consts = br.reshape(m, m, m)
    Q = _make_algebra(p, fexp, consts, validate)
    proj = Morphism(L, Q, P, check=False)
    return Q, proj, lifts


def _make_algebra(p, orders, consts, validate):
    if not orders:
        return FiniteLieAlgebra(p, (), None, validate=False, name="zero")
    return FiniteLieAlgebra(p, orders, consts, validate=validate)


def subalgebra_as_algebra(S: Sublattice, validate: bool = False):
    """Present a subalgebra on its own abelian basis; returns ``(K, embedding)``."""
    P = S.parent
    W, exps, _, _ = S.abelian_basis()
    m = len(exps)
    consts = {}
    if m:
        A = np.repeat(W, m, axis=0)
        B = np.tile(W, (m, 1))
        br = P.bracket_many(A, B)
        for idx in range(m * m):
            vec = br[idx]
            if np.any(vec != 0):
                co = S.coordinates(vec)
                if co is None:
                    raise ValueError("sublattice is not closed under the bracket")
                if any(co):
                    consts[(idx // m, idx % m)] = {k: c for k, c in enumerate(co) if c}
    K = _make_algebra(P.p, exps, consts, validate)
    emb = Morphism(K, P, W if m else np.zeros((0, P.n)), check=False)
    return K, emb


def is_isomorphism_onto(f: Morphism, image: Sublattice | None = None) -> bool:
    """Injective bracket-preserving map with the given image (whole target by default)."""
    img = f.image()
    want = image if image is not None else f.target.whole()
    return f.kernel().is_zero() and img == want and f.is_bracket_preserving()


def fingerprint(L: FiniteLieAlgebra) -> tuple:
    """Graded order profile and generator count; an invariant, not an isomorphism test."""
    return (L.order_exponent, graded_order_profile(L), min_generators(L), tuple(sorted(L.orders)))


# ---------------------------------------------------------------------------
# Omega-extension covers


@dataclass
class FreePresentation:
    """L = M / I with M free of rank n, I ⊆ pM, p^E M ⊆ I, and a lifted bilinear form."""

    p: int
    rank: int
    E: int
    relations: list
    lift: dict
    origin: "FiniteLieAlgebra | None" = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self._raw = FiniteLieAlgebra(self.p, (self.E,) * self.rank, self.lift, validate=False)
        self._I = Sublattice(self._raw, np.asarray(self.relations, dtype=object).reshape(-1, self.rank))

    @classmethod
    def from_algebra(cls, L: FiniteLieAlgebra) -> "FreePresentation":
        rels = []
        for i, e in enumerate(L.orders):
            v = [0] * L.n
            v[i] = L.p**e
            rels.append(v)
        lift = {}
        for i in range(L.n):
            for j in range(L.n):
                vec = {k: int(L.C[i, j, k]) for k in range(L.n) if L.C[i, j, k]}
                if vec:
                    lift[(i, j)] = vec
        return cls(L.p, L.n, L.E, rels, lift, origin=L)

    @property
    def module(self) -> FiniteLieAlgebra:
        return self._raw

    @property
    def relation_lattice(self) -> Sublattice:
        return self._I

    def algebra(self):
        """(L, projection M -> L)."""
        I = self._I
        self.check()
        if self.origin is not None:
            # M/I is the original algebra in the same coordinates
            proj = Morphism(self._raw, self.origin, np.eye(self.rank, dtype=object), check=False)
            if proj.kernel() != I:
                raise InvalidLieAlgebra("relation lattice does not match the original algebra")
            return self.origin, proj
        Q, proj, _ = quotient(self._raw, I, validate=False, require_ideal=True)
        return Q, proj

    def check(self):
        M, I = self._raw, self._I
        pM = M.whole().scaled(1)
        if not I <= pM:
            raise RelationNotInPM("relation lattice is not contained in pM")
        if not is_ideal(I):
            raise JacobiLiftFailure("lifted form does not preserve the relation lattice")
        n = M.n
        C = np.asarray(M.C, dtype=object)
        T = np.tensordot(C, C, axes=([2], [0])) % M.q
        J = (T + T.transpose(2, 0, 1, 3) + T.transpose(1, 2, 0, 3)) % M.q
        flat = J.reshape(n**3, n)
        bad = ~I.contains_many(flat)
        if bad.any():
            t = int(np.nonzero(bad)[0][0])
            raise JacobiLiftFailure(
                f"Jacobi sum of lifted form not in I at basis triple {(t // n // n + 1, t // n % n + 1, t % n + 1)}"
            )


@dataclass
class OmegaWitness:
    """A p-central cover C with a map C -> target whose kernel is Omega_1(C)."""

    cover: FiniteLieAlgebra
    projection: Morphism
    image: Sublattice

    def checks(self) -> dict:
        # the parts are never mutated, so the verdicts are computed once
        cached = self.__dict__.get("_checks")
        if cached is None:
            C = self.cover
            f = self.projection
            cached = {
                "cover-p-central": is_p_central(C),
                "cover-is-lie": check_axioms(C).valid,
                "projection-bracket-preserving": f.is_bracket_preserving(),
                "projection-kernel-is-omega1": f.kernel() == omega_1(C),
                "projection-image": f.image() == self.image,
            }
            self.__dict__["_checks"] = cached
        return dict(cached)

    def verify(self) -> bool:
        return all(self.checks().values())


@dataclass
class CoverResult:
    cover: FiniteLieAlgebra
    witness: OmegaWitness
    algebra: FiniteLieAlgebra
    omega_matches_relations: bool
    checks: dict


def omega_extension_cover(P: FreePresentation) -> CoverResult:
    """Build pM/pI for L = M/I; its quotient by Omega_1 is pL."""
    P.check()
    M, I = P.module, P.relation_lattice
    p = P.p
    L, projL = P.algebra()
    # pM/pI is identified with M/I through x -> p x; the bracket becomes p{,}.
    scaled = FiniteLieAlgebra(p, M.orders, (np.asarray(M.C, dtype=object) * p) % M.q, validate=False)
    I_s = Sublattice(scaled, I.H)
    C, projC, liftsC = quotient(scaled, I_s, validate=False, require_ideal=True)
    # class of p x + pI  ->  p x + I
    phi_rows = projL.apply_many(np.asarray(liftsC, dtype=object) * p) if C.n else np.zeros((0, L.n))
    phi = Morphism(C, L, phi_rows, check=False)
    pL = p_multiple(L)
    witness = OmegaWitness(C, phi, pL)
    # Omega_1(pM/pI) = I/pI : in M/I coordinates, {x : p x in I}.
    times_p = Morphism(M, L, np.asarray(projL.matrix, dtype=object) * p, check=False)
    x_with_px_in_I = times_p.kernel()
    omega_from_I = Sublattice(C, projC.apply_many(x_with_px_in_I.H)) if C.n else C.zero_sub()
    omega_ok = omega_from_I == omega_1(C)
    checks = witness.checks()
    checks["omega1-equals-I-mod-pI"] = omega_ok
    return CoverResult(C, witness, L, omega_ok, checks)
