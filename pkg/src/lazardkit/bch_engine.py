"""Truncated Baker-Campbell-Hausdorff series and group law on nilpotent algebras.

The series is computed as ``log(exp(a) exp(b))`` in the truncated free
associative algebra over Q, then written in the Hall basis on ``a = x1``,
``b = x2`` by exact elimination.  Dynkin's bracket formula gives an
independent second route used for cross-checking.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ClassTooHigh, DenominatorNotInvertible, SizeLimitExceeded
from .hall_basis import HallBasis, bracket_reduce, element_to_words
from .padic_arith import reduce_rational_int

MAX_CLASS = 12
LETTERS = ("a", "b")


class FreeAssocPoly:
    """Sparse noncommutative polynomial on letters 1..d, truncated at length c."""

    __slots__ = ("terms", "d", "c")

    def __init__(self, terms=None, d: int = 2, c: int = 1):
        self.d = d
        self.c = c
        self.terms = {w: Fraction(v) for w, v in (terms or {}).items() if v and len(w) <= c}

    @classmethod
    def letter(cls, g: int, d: int, c: int):
        return cls({(g,): 1}, d, c)

    @classmethod
    def one(cls, d, c):
        return cls({(): 1}, d, c)

    def _like(self, terms):
        out = FreeAssocPoly.__new__(FreeAssocPoly)
        out.d, out.c = self.d, self.c
        out.terms = {w: v for w, v in terms.items() if v}
        return out

    def __add__(self, other):
        t = dict(self.terms)
        for w, v in other.terms.items():
            t[w] = t.get(w, 0) + v
        return self._like(t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        k = Fraction(k)
        return self._like({w: v * k for w, v in self.terms.items()})

    def __mul__(self, other):
        t: dict = {}
        c = self.c
        by_len: dict = {}
        for w, v in other.terms.items():
            by_len.setdefault(len(w), []).append((w, v))
        for w1, v1 in self.terms.items():
            room = c - len(w1)
            for ln, items in by_len.items():
                if ln > room:
                    continue
                for w2, v2 in items:
                    w = w1 + w2
                    t[w] = t.get(w, 0) + v1 * v2
        return self._like(t)

    def homogeneous(self, n: int) -> dict:
        return {w: v for w, v in self.terms.items() if len(w) == n}

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, FreeAssocPoly) and self.terms == other.terms

    def __repr__(self):
        return f"FreeAssocPoly({len(self.terms)} terms, c={self.c})"


def assoc_exp(x: FreeAssocPoly) -> FreeAssocPoly:
    if x.constant():
        raise ValueError("exp needs a series without constant term")
    out = FreeAssocPoly.one(x.d, x.c)
    power = FreeAssocPoly.one(x.d, x.c)
    for k in range(1, x.c + 1):
        power = power * x
        out = out + power.scale(Fraction(1, math.factorial(k)))
    return out


def assoc_log(u: FreeAssocPoly) -> FreeAssocPoly:
    if u.constant() != 1:
        raise ValueError("log needs constant term 1")
    x = u - FreeAssocPoly.one(u.d, u.c)
    out = FreeAssocPoly({}, u.d, u.c)
    power = FreeAssocPoly.one(u.d, u.c)
    for k in range(1, u.c + 1):
        power = power * x
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def assoc_bch(c: int) -> FreeAssocPoly:
    """log(exp(a) exp(b)) through length c."""
    a = FreeAssocPoly.letter(1, 2, c)
    b = FreeAssocPoly.letter(2, 2, c)
    return assoc_log(assoc_exp(a) * assoc_exp(b))


def _word_count(d: int, c: int) -> int:
    return sum(d**k for k in range(c + 1))


def hall_project(poly: FreeAssocPoly, basis: HallBasis) -> dict[int, Fraction]:
    """Write a Lie polynomial in Hall coordinates; raises if it is not in the Lie span."""
    out: dict[int, Fraction] = {}
    for w in range(1, basis.c + 1):
        target = poly.homogeneous(w)
        if not target:
            continue
        idx = [h.position for h in basis if h.weight == w]
        # sparse elimination: rows are Hall images, tracked with their combination
        pivots: dict = {}
        for h in idx:
            row = {k: Fraction(v) for k, v in element_to_words(basis[h]).items()}
            comb = {h: Fraction(1)}
            row, comb = _reduce(row, comb, pivots)
            if row:
                lead = min(row)
                inv = 1 / row[lead]
                pivots[lead] = ({k: v * inv for k, v in row.items()},
                                {k: v * inv for k, v in comb.items()})
        rem = dict(target)
        coeff: dict = {}
        while rem:
            lead = min(rem)
            if lead not in pivots:
                raise ValueError("polynomial is not a Lie element")
            prow, pcomb = pivots[lead]
            f = rem[lead]
            for k, v in prow.items():
                s = rem.get(k, 0) - f * v
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
            for k, v in pcomb.items():
                coeff[k] = coeff.get(k, 0) + f * v
        for k, v in coeff.items():
            if v:
                out[k] = v
    return out


def _reduce(row, comb, pivots):
    row = dict(row)
    comb = dict(comb)
    changed = True
    while changed and row:
        changed = False
        for lead in sorted(row):
            if lead in pivots:
                prow, pcomb = pivots[lead]
                f = row[lead]
                for k, v in prow.items():
                    s = row.get(k, 0) - f * v
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
                for k, v in pcomb.items():
                    s = comb.get(k, 0) - f * v
                    if s:
                        comb[k] = s
                    else:
                        comb.pop(k, None)
                changed = True
                break
    return row, comb


def hall_to_assoc(coeffs: dict, basis: HallBasis) -> FreeAssocPoly:
    t: dict = {}
    for h, v in coeffs.items():
        for w, cw in element_to_words(basis[h]).items():
            t[w] = t.get(w, 0) + v * cw
    return FreeAssocPoly(t, basis.d, basis.c)


@dataclass(frozen=True)
class BchSeries:
    """Coefficients of BCH(a, b) on the Hall basis of L_c({a, b})."""

    c: int
    basis: HallBasis
    coefficients: tuple  # (position, Fraction) pairs in Hall order

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coefficients)

    def coefficient(self, bracket: str) -> Fraction:
        h = self.basis.parse(bracket, names=list(LETTERS))
        return self.as_dict().get(h.position, Fraction(0))

    def denominators(self) -> set[int]:
        return {v.denominator for _, v in self.coefficients}

    def lines(self) -> list[str]:
        return [f"{v} · {self.basis[h].to_string(list(LETTERS))}" for h, v in self.coefficients]

    def residues(self, p: int, E: int) -> dict[int, int]:
        q = p**E
        return {h: reduce_rational_int(v, p, q) for h, v in self.coefficients}

    def truncate(self, c: int) -> "BchSeries":
        if c > self.c:
            raise ValueError("cannot extend a truncated series")
        return BchSeries(c, _basis(c), tuple((h, v) for h, v in self.coefficients if self.basis[h].weight <= c))


@functools.lru_cache(maxsize=None)
def _basis(c: int) -> HallBasis:
    return HallBasis(2, c)


@functools.lru_cache(maxsize=None)
def bch_series(c: int) -> BchSeries:
    if c < 1:
        raise ValueError("class must be positive")
    if c > MAX_CLASS:
        raise SizeLimitExceeded(f"BCH series is capped at class {MAX_CLASS}")
    basis = _basis(c)
    coeffs = hall_project(assoc_bch(c), basis)
    return BchSeries(c, basis, tuple(sorted(coeffs.items())))


def dynkin_series(c: int) -> BchSeries:
    """BCH through Dynkin's formula with right-nested brackets."""
    basis = _basis(c)
    gens = {1: {0: Fraction(1)}, 2: {1: Fraction(1)}}
    total: dict = {}
    for n in range(1, c + 1):
        sign = Fraction((-1) ** (n - 1), n)
        # pairs (r_i, s_i) with r_i + s_i >= 1, total length <= c
        blocks = [(r, s) for r in range(c + 1) for s in range(c + 1) if 1 <= r + s <= c]
        for combo in itertools.product(blocks, repeat=n):
            length = sum(r + s for r, s in combo)
            if length > c:
                continue
            word = []
            denom = length
            for r, s in combo:
                word += [1] * r + [2] * s
                denom *= math.factorial(r) * math.factorial(s)
            val = dict(gens[word[-1]])
            for g in reversed(word[:-1]):
                val = bracket_reduce(gens[g], val, basis)
                if not val:
                    break
            if not val:
                continue
            f = sign / denom
            for k, v in val.items():
                total[k] = total.get(k, 0) + f * v
    return BchSeries(c, basis, tuple(sorted((k, v) for k, v in total.items() if v)))


def verify_p_integrality(s: BchSeries, p: int) -> bool:
    return all(d % p for d in s.denominators())


def verify_round_trip(s: BchSeries) -> bool:
    """Re-expanding the Hall coefficients reproduces the associative log."""
    return hall_to_assoc(s.as_dict(), s.basis) == assoc_bch(s.c)


# ---------------------------------------------------------------------------
# evaluation


class BchEvaluator:
    """Group law x*y = BCH(x, y) on a fixed algebra, with residues precomputed."""

    def __init__(self, L, c: int | None = None):
        from .lie_core import nilpotency_class

        cls = nilpotency_class(L) if c is None else c
        if cls >= L.p:
            raise ClassTooHigh(f"class {cls} is not below p = {L.p}")
        self.L = L
        self.c = max(cls, 1)
        self.series = bch_series(self.c)
        try:
            self.res = self.series.residues(L.p, L.E)
        except DenominatorNotInvertible:
            raise ClassTooHigh(f"BCH denominators not invertible at p = {L.p}")
        self.basis = self.series.basis

    def multiply_many(self, X, Y):
        L = self.L
        X = L.reduce(X)
        Y = L.reduce(Y)
        vals = [None] * len(self.basis)
        vals[0], vals[1] = X, Y
        out = np.zeros_like(X)
        for h in self.basis:
            if not h.is_generator:
                vals[h.position] = L.bracket_many(vals[h.left.position], vals[h.right.position])
            r = self.res.get(h.position)
            if r:
                out = (out + r * vals[h.position]) % L.order_vec
        return out

    def multiply(self, x, y):
        return self.multiply_many(np.asarray([list(x)], dtype=object), np.asarray([list(y)], dtype=object))[0]

    def power_many(self, X, k: int):
        L = self.L
        X = L.reduce(X)
        if k < 0:
            X = L.reduce(-np.asarray(X, dtype=object))
            k = -k
        result = np.zeros_like(X)
        base = X
        while k:
            if k & 1:
                result = self.multiply_many(result, base)
            k >>= 1
            if k:
                base = self.multiply_many(base, base)
        return result

    def commutator_many(self, X, Y):
        """x^-1 y^-1 x y."""
        L = self.L
        nx = L.reduce(-np.asarray(X, dtype=object))
        ny = L.reduce(-np.asarray(Y, dtype=object))
        return self.multiply_many(self.multiply_many(nx, ny), self.multiply_many(X, Y))


def _evaluator(L, s: BchSeries | None):
    from .lie_core import nilpotency_class

    cls = nilpotency_class(L)
    if cls >= L.p:
        raise ClassTooHigh(f"class {cls} is not below p = {L.p}")
    if s is not None and s.c < cls:
        raise ClassTooHigh(f"series of class {s.c} is too short for class {cls}")
    return BchEvaluator(L, cls)


def group_multiply(L, x, y, s: BchSeries | None = None):
    from .lie_core import LieElement

    ev = _evaluator(L, s)
    cx = x.coords if isinstance(x, LieElement) else x
    cy = y.coords if isinstance(y, LieElement) else y
    return LieElement(L, tuple(int(v) for v in ev.multiply(cx, cy)))


def group_inverse(x):
    return -x


def group_power(L, x, k: int, s: BchSeries | None = None):
    from .lie_core import LieElement

    ev = _evaluator(L, s)
    cx = x.coords if isinstance(x, LieElement) else x
    out = ev.power_many(np.asarray([list(cx)], dtype=object), k)[0]
    return LieElement(L, tuple(int(v) for v in out))
