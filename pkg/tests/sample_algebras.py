"""Generators of test algebras: quotients of free nilpotent algebras."""

import numpy as np

from lazardkit.hat_construction import free_ideal, random_free_ideal_generators
from lazardkit.lie_core import FiniteLieAlgebra, quotient


def random_quotient(d, c, p, seed, depth=2, extra=3):
    rng = np.random.default_rng(seed)
    gens = random_free_ideal_generators(d, c, p, rng, depth=depth, extra=extra)
    I = free_ideal(d, c, p, gens)
    L, _, _ = quotient(I.free, I.lattice, validate=False)
    return L


def small_algebras(p):
    """A fixed menu of algebras of class < p, small enough for exhaustive group checks."""
    out = [
        FiniteLieAlgebra.abelian(p, (1,)),
        FiniteLieAlgebra.abelian(p, (2, 1)),
        FiniteLieAlgebra.heisenberg(p),
        FiniteLieAlgebra.free_nilpotent(2, 2, p, 1),
        FiniteLieAlgebra.free_nilpotent(2, 3, p, 1),
        FiniteLieAlgebra.free_nilpotent(2, 2, p, 2),
    ]
    # filiform-type algebra of class 3: [x1, x_i] = x_{i+1}
    out.append(FiniteLieAlgebra.from_brackets(p, (1, 1, 1, 1), {(0, 1): {2: 1}, (0, 2): {3: 1}}))
    return out


def full_class_quotient(d, c, p, rng, depth=3, extra=2, tries=50):
    """A random quotient of L_c(X) whose class is still c (when d > 1)."""
    from lazardkit.lie_core import nilpotency_class

    want = c if d > 1 else 1
    L = None
    for _ in range(tries):
        L = random_quotient(d, c, p, int(rng.integers(1 << 30)), depth=depth, extra=extra)
        if L.n and nilpotency_class(L) == want:
            return L
    return L


def generated_instances(count, rng, dims=(1, 2, 3), classes=(1, 2, 3), primes=(5, 7), **kw):
    cells = [(d, c, p) for p in primes for d in dims for c in classes if c < p]
    return [((d, c, p), full_class_quotient(d, c, p, rng, **kw)) for d, c, p in
            (cells[i % len(cells)] for i in range(count))]
