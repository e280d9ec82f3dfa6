"""Compare the string engine against brute force on small windows.

For each algebra, every indecomposable complex the brute-force oracle finds in
a degree window (at most ``--per-degree`` projectives per degree) must be
isomorphic to exactly one realized homotopy string, and vice versa.

    python3 scripts/oracle_agreement.py --lo -2 --hi 0
"""

import argparse
import time

from gentle_discrete.algebra import build_lambda
from gentle_discrete.exactla import Field
from gentle_discrete.homcat import identify_string
from gentle_discrete.oracles import brute_window_census


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=int, default=-2)
    ap.add_argument("--hi", type=int, default=0)
    ap.add_argument("--per-degree", type=int, default=2)
    ap.add_argument("--field", type=int, default=2)
    args = ap.parse_args()
    field = Field(args.field)
    for params in ((1, 2, 1), (2, 3, 0), (1, 1, 0), (2, 2, 0)):
        alg = build_lambda(*params)
        t = time.perf_counter()
        found = brute_window_census(alg, field, (args.lo, args.hi), args.per_degree)
        labels = [identify_string(C) for C in found]
        missing = sum(lab is None for lab in labels)
        dupes = len(labels) - missing - len(set(lab for lab in labels if lab is not None))
        print(f"{alg.name:<16}{len(found):>6} complexes  unidentified {missing}  duplicates {dupes}"
              f"  ({time.perf_counter() - t:.1f}s)")


if __name__ == "__main__":
    main()
