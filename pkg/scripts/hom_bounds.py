"""Largest dim Hom_K between string complexes, as the letter bound grows.

    python3 scripts/hom_bounds.py --max-letters 6
"""

import argparse
import time

from gentle_discrete.algebra import build_lambda
from gentle_discrete.exactla import Field

FAMILIES = [(1, 2, 1), (1, 3, 0), (2, 3, 0), (2, 4, 1), (2, 2, 0), (1, 1, 0)]


def main() -> None:
    from gentle_discrete.discreteness import hom_bound_scan

    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-letters", type=int, default=5)
    ap.add_argument("--field", type=int, default=2, help="prime p of F_p")
    args = ap.parse_args()
    field = Field(args.field)
    print(f"{'algebra':<16}{'letters':>8}{'max dim':>9}{'pairs':>9}{'solved':>8}{'seconds':>9}  witness")
    for params in FAMILIES:
        alg = build_lambda(*params)
        for letters in range(1, args.max_letters + 1):
            t = time.perf_counter()
            res = hom_bound_scan(alg, letters, field)
            print(f"{alg.name:<16}{letters:>8}{res.max_dim:>9}{res.pairs:>9}{res.computed:>8}"
                  f"{time.perf_counter() - t:>9.2f}  {res.witness_strings}")


if __name__ == "__main__":
    main()
