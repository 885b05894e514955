"""Brute-force reference implementations used by the tests."""

import itertools

import numpy as np


def span_by_enumeration(rows, p, E, n):
    """Additive closure of the rows in (Z/p^E)^n, as a set of tuples."""
    q = p**E
    gens = [tuple(int(x) % q for x in r) for r in rows]
    seen = {tuple([0] * n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % q for a, b in zip(v, g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def all_vectors(p, E, n):
    return np.array(list(itertools.product(range(p**E), repeat=n)), dtype=np.int64).reshape(-1, n)


def modules_up_to(size):
    """(p, E, n) with p^(E n) <= size."""
    out = []
    for p in (2, 3, 5, 7):
        for E in range(1, 10):
            for n in range(1, 10):
                if p ** (E * n) <= size:
                    out.append((p, E, n))
    return out


def lie_bracket_words(u, v):
    """uv - vu on dicts word -> coefficient."""
    out = {}
    for a, x in u.items():
        for b, y in v.items():
            out[a + b] = out.get(a + b, 0) + x * y
            out[b + a] = out.get(b + a, 0) - x * y
    return {k: c for k, c in out.items() if c}
