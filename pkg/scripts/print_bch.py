"""Print the BCH series on the Hall basis, or rewrite the golden files."""

import argparse
from pathlib import Path

from lazardkit.bch_engine import bch_series, dynkin_series

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--class", dest="cls", type=int, default=4)
    ap.add_argument("--write-golden", action="store_true", help="regenerate tests/golden/bch_c1..5.txt")
    args = ap.parse_args()
    if args.write_golden:
        for c in range(1, 6):
            (GOLDEN / f"bch_c{c}.txt").write_text("\n".join(bch_series(c).lines()) + "\n")
        return 0
    s = bch_series(args.cls)
    print("\n".join(s.lines()))
    if args.cls <= 4:
        print("dynkin agrees:", dynkin_series(args.cls).as_dict() == s.as_dict())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
