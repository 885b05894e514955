"""Sweep the hat construction over a (d, c, p) grid and tabulate the bounded quantities.

For each cell: the worst kernel order, worst image index and the hat rank,
next to the a-priori exponent (c-1) r.
"""

import argparse
import time

import numpy as np

from lazardkit.config import HatGridConfig
from lazardkit.hat_construction import random_free_ideal_generators, structure_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--per-cell", type=int, default=HatGridConfig.per_cell)
    ap.add_argument("--seed", type=int, default=HatGridConfig.seed)
    args = ap.parse_args()
    cfg = HatGridConfig(per_cell=args.per_cell, seed=args.seed)
    print(f"{'d':>2} {'c':>2} {'p':>2} {'runs':>5} {'ok':>4} {'max J':>6} {'max idx':>7} {'(c-1)r':>7} {'r':>3} {'sec':>6}")
    total_bad = 0
    for d, c, p in cfg.cells():
        rng = np.random.default_rng([cfg.seed, d, c, p])
        t = time.perf_counter()
        ok = 0
        worst_j = worst_idx = 0
        r = bound = 0
        for _ in range(cfg.per_cell):
            rep = structure_pipeline(d, c, p, random_free_ideal_generators(d, c, p, rng, depth=cfg.depth, extra=cfg.extra))
            q = rep.quantities
            ok += rep.ok
            worst_j = max(worst_j, q["log_p |J|"])
            worst_idx = max(worst_idx, q["log_p image index"])
            r, bound = q["hat rank"], q["log_p bound"]
        total_bad += cfg.per_cell - ok
        print(f"{d:>2} {c:>2} {p:>2} {cfg.per_cell:>5} {ok:>4} {worst_j:>6} {worst_idx:>7} {bound:>7} {r:>3} {time.perf_counter() - t:>6.2f}")
    return 1 if total_bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
