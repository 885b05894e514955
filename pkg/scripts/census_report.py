"""Exhaustive census of quotients of L_c(X) containing p^k L_c(X)."""

import argparse
from pathlib import Path

from lazardkit.cohomology_invariants import census


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prime", type=int, default=5)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--class", dest="cls", type=int, default=2)
    ap.add_argument("--power", type=int, default=1, help="k in p^k L ⊆ I")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    rep = census(args.prime, args.dim, args.cls, k=args.power, workers=args.workers)
    text = rep.summary_json()
    if args.out:
        args.out.write_text(text + "\n")
    s = rep.summary()
    for name, value in sorted(s["quantities"].items()):
        print(f"{name:>28} {value}")
    for b in s["buckets"]:
        print(f"  {b['key']}  x{b['count']}")
    return 0 if all(s["verdicts"].values()) else 2


if __name__ == "__main__":
    raise SystemExit(main())
