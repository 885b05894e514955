"""Exact arithmetic modulo p^E and row-span normal forms over Z/p^E.

Matrices are numpy arrays.  Entries live in ``[0, p^E)``; when ``p^E`` is
small enough that every intermediate product (and a matmul-sized sum of them)
fits a machine word the arrays use ``int64``, otherwise ``dtype=object`` with
Python integers.  Both paths run the same code.

The ring Z/p^E is a chain ring, so the Howell form is computed by a single
column sweep: pick the entry of least valuation, scale it to a power of p,
clear the column, and push the annihilated multiple ``p^(E-k) * row`` back
into the pool.  The last step is what gives the Howell property, so membership
of a vector in the span is decided by greedy elimination against the pivots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering

import numpy as np

from .errors import DenominatorNotInvertible, NotPrime

_INT64_LIMIT = 2**62


@total_ordering
class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __lt__(self, other):
        return False

    def __hash__(self):
        return hash("INFINITY")

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def arith_dtype(q: int, terms: int = 1):
    """int64 when ``terms`` products of two residues mod q cannot overflow."""
    if q * q * max(terms, 1) < _INT64_LIMIT:
        return np.int64
    return object


@dataclass(frozen=True)
class Modulus:
    p: int
    E: int
    q: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"p must be prime, got {self.p}")
        if self.E < 1:
            raise ValueError(f"exponent must be positive, got {self.E}")
        object.__setattr__(self, "q", self.p**self.E)

    def dtype(self, terms: int = 1):
        return arith_dtype(self.q, terms)


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: Modulus

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus.q)

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError("residues with different moduli")
            return other.value
        return other

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __int__(self):
        return self.value


def valuation(n: int, m: Modulus):
    """p-adic valuation of ``n``, capped at E; ``INFINITY`` for zero."""
    if n == 0:
        return INFINITY
    if n % m.q == 0:
        return m.E
    k = 0
    while n % m.p == 0:
        n //= m.p
        k += 1
    return k


def vp(n: int, p: int) -> int:
    """Uncapped valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def reduce_rational(q: Fraction, m: Modulus) -> Residue:
    q = Fraction(q)
    if q.denominator % m.p == 0:
        raise DenominatorNotInvertible(
            f"denominator {q.denominator} of {q} is divisible by p={m.p}"
        )
    return Residue(q.numerator * pow(q.denominator, -1, m.q), m)


def reduce_rational_int(q: Fraction, p: int, modulus: int) -> int:
    q = Fraction(q)
    if q.denominator % p == 0:
        raise DenominatorNotInvertible(
            f"denominator {q.denominator} of {q} is divisible by p={p}"
        )
    return q.numerator * pow(q.denominator, -1, modulus) % modulus


# ---------------------------------------------------------------------------
# matrices


class ResidueMatrix:
    """A row matrix over Z/p^E.  Immutable once built."""

    __slots__ = ("entries", "modulus")

    def __init__(self, entries, modulus: Modulus, ncols: int | None = None):
        dtype = modulus.dtype(max(1, ncols or 1) * 64)
        arr = np.asarray(entries, dtype=object)
        if arr.size == 0:
            if ncols is None:
                ncols = arr.shape[1] if arr.ndim == 2 else 0
            arr = np.zeros((0, ncols), dtype=object)
        elif arr.ndim == 1:
            arr = arr.reshape(1, -1)
        arr = (arr % modulus.q).astype(dtype)
        arr.flags.writeable = False
        self.entries = arr
        self.modulus = modulus

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def tolist(self):
        return [[int(x) for x in row] for row in self.entries]

    def __eq__(self, other):
        if not isinstance(other, ResidueMatrix):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.entries.shape == other.entries.shape
            and bool(np.all(self.entries == other.entries))
        )

    def __hash__(self):
        return hash((self.modulus, tuple(map(tuple, self.tolist()))))

    def __repr__(self):
        return f"ResidueMatrix({self.tolist()}, p={self.modulus.p}, E={self.modulus.E})"


def as_array(rows, q: int, ncols: int, dtype=None):
    if dtype is None:
        dtype = arith_dtype(q, 64 * max(ncols, 1))
    arr = np.asarray(rows, dtype=object)
    if arr.size == 0:
        return np.zeros((0, ncols), dtype=dtype)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return (arr % q).astype(dtype)


def _val_array(x, p: int, E: int):
    """Valuations of the nonzero residues in ``x`` (all < p^E)."""
    v = np.zeros(len(x), dtype=np.int64)
    cur = x.copy()
    for _ in range(E):
        d = cur % p == 0
        if not d.any():
            break
        v += d
        cur = np.where(d, cur // p, cur)
    return v


def howell_array(A, p: int, E: int):
    """Howell form of the row span of ``A`` over Z/p^E.

    Returns ``(H, pivots)`` where ``pivots[t] = (column, valuation)`` of row t.
    """
    q = p**E
    A = np.array(A, copy=True) % q
    n = A.shape[1]
    if A.shape[0]:
        A = A[np.any(A != 0, axis=1)]
    out = []
    pivots = []
    for j in range(n):
        if A.shape[0] == 0:
            break
        col = A[:, j]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        vals = _val_array(col[nz], p, E)
        pick = int(np.argmin(vals))
        t = int(nz[pick])
        k = int(vals[pick])
        pk = p**k
        inv = pow(int(col[t]) // pk, -1, q)
        r = (A[t] * inv) % q
        A = np.delete(A, t, axis=0)
        if A.shape[0]:
            f = A[:, j] // pk
            A = (A - f[:, None] * r[None, :]) % q
        if k > 0:
            extra = (r * p ** (E - k)) % q
            A = np.vstack([A, extra[None, :]])
        if A.shape[0]:
            A = A[np.any(A != 0, axis=1)]
        out.append(r)
        pivots.append((j, k))
    if not out:
        return np.zeros((0, n), dtype=A.dtype), []
    H = np.array(out, dtype=A.dtype)
    for t, (j, k) in enumerate(pivots):
        if t == 0:
            continue
        pk = p**k
        f = H[:t, j] // pk
        if np.any(f != 0):
            H[:t] = (H[:t] - f[:, None] * H[t][None, :]) % q
    return H, pivots


def pivots_of(H, p: int, E: int):
    piv = []
    for row in H:
        nz = np.nonzero(row)[0]
        j = int(nz[0])
        piv.append((j, vp(int(row[j]), p)))
    return piv


def howell_form(M: ResidueMatrix) -> ResidueMatrix:
    H, _ = howell_array(M.entries, M.modulus.p, M.modulus.E)
    return ResidueMatrix(H, M.modulus, ncols=M.cols)


def contains_array(H, pivots, V, p: int, E: int):
    """Boolean mask: which rows of ``V`` lie in the span of Howell form ``H``."""
    q = p**E
    V = np.array(V, copy=True) % q
    if V.ndim == 1:
        V = V.reshape(1, -1)
    ok = np.ones(V.shape[0], dtype=bool)
    piv_cols = {j: (t, k) for t, (j, k) in enumerate(pivots)}
    for j in range(V.shape[1]):
        col = V[:, j]
        if j in piv_cols:
            t, k = piv_cols[j]
            pk = p**k
            ok &= col % pk == 0
            f = col // pk
            V = (V - f[:, None] * H[t][None, :]) % q
        else:
            ok &= col == 0
    return ok


def span_membership(H: ResidueMatrix, v) -> bool:
    m = H.modulus
    piv = pivots_of(H.entries, m.p, m.E)
    vec = as_array([list(v)], m.q, H.cols if H.rows else len(v), H.entries.dtype)
    return bool(contains_array(H.entries, piv, vec, m.p, m.E)[0])


def span_size_exponent(pivots, E: int) -> int:
    return sum(E - k for _, k in pivots)


def span_index(H: ResidueMatrix, ambient_orders) -> int:
    """Index in the ambient module prod Z/ambient_orders[i]."""
    m = H.modulus
    n = len(ambient_orders)
    rel = np.zeros((n, n), dtype=object)
    for i, o in enumerate(ambient_orders):
        rel[i, i] = o % m.q
    if H.rows:
        rows = np.vstack([np.asarray(H.entries, dtype=object), rel])
    else:
        rows = rel
    _, piv = howell_array(as_array(rows, m.q, n), m.p, m.E)
    return m.p ** (n * m.E - span_size_exponent(piv, m.E))


def kernel_array(F, p: int, E: int):
    """Rows spanning {x : x F == 0 mod p^E} (Howell form over Z/p^E)."""
    q = p**E
    m, n = F.shape
    aug = np.zeros((m, n + m), dtype=F.dtype)
    aug[:, :n] = F % q
    aug[np.arange(m), n + np.arange(m)] = 1
    H, piv = howell_array(aug, p, E)
    keep = [t for t, (j, _) in enumerate(piv) if j >= n]
    K = H[keep, n:] if keep else np.zeros((0, m), dtype=F.dtype)
    return howell_array(K, p, E)


def solve_left_array(G, v, p: int, E: int):
    """One solution x of ``x G == v`` mod p^E, or None."""
    q = p**E
    m, n = G.shape
    aug = np.zeros((m, n + m), dtype=G.dtype)
    aug[:, :n] = G % q
    aug[np.arange(m), n + np.arange(m)] = 1
    H, piv = howell_array(aug, p, E)
    w = np.zeros(n + m, dtype=G.dtype)
    w[:n] = np.asarray(v) % q
    for t, (j, k) in enumerate(piv):
        if j >= n:
            break
        pk = p**k
        if int(w[j]) % pk:
            return None
        w = (w - (w[j] // pk) * H[t]) % q
    if np.any(w[:n] != 0):
        return None
    return (-w[n:]) % q


def intersect_arrays(A, B, p: int, E: int):
    """Howell form of span(A) ∩ span(B)."""
    n = A.shape[1]
    top = np.hstack([A, A])
    bottom = np.hstack([B, np.zeros_like(B)])
    H, piv = howell_array(np.vstack([top, bottom]), p, E)
    keep = [t for t, (j, _) in enumerate(piv) if j >= n]
    K = H[keep, n:] if keep else np.zeros((0, n), dtype=A.dtype)
    return howell_array(K, p, E)


def smith_array(A, p: int, E: int):
    """Smith form over Z/p^E via column transforms.

    Returns ``(exps, V, Vinv)`` with ``exps[t]`` the valuation of the t-th
    diagonal entry of ``U A V`` (E where the diagonal entry is zero).  The
    row span of A equals the row span of ``diag(p^exps) Vinv``.
    """
    q = p**E
    A = np.array(A, copy=True, dtype=object) % q
    m, n = A.shape
    V = np.eye(n, dtype=object)
    Vinv = np.eye(n, dtype=object)
    exps = [E] * n
    for t in range(min(m, n)):
        sub = A[t:, t:]
        nzi, nzj = np.nonzero(sub)
        if len(nzi) == 0:
            break
        best = None
        for i, j in zip(nzi, nzj):
            v = vp(int(sub[i, j]), p)
            if best is None or v < best[0]:
                best = (v, int(i) + t, int(j) + t)
                if v == 0:
                    break
        k, i, j = best
        if i != t:
            A[[t, i]] = A[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
            Vinv[[t, j]] = Vinv[[j, t]]
        pk = p**k
        inv = pow(int(A[t, t]) // pk, -1, q)
        A[t] = (A[t] * inv) % q
        for i2 in range(t + 1, m):
            if A[i2, t]:
                A[i2] = (A[i2] - (A[i2, t] // pk) * A[t]) % q
        for j2 in range(t + 1, n):
            f = A[t, j2] // pk
            if f:
                A[:, j2] = (A[:, j2] - f * A[:, t]) % q
                V[:, j2] = (V[:, j2] - f * V[:, t]) % q
                Vinv[t] = (Vinv[t] + f * Vinv[j2]) % q
        exps[t] = k
    return exps, V, Vinv
