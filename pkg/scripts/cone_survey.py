"""How many cone classes do the maps between two indecomposables produce?

Runs the exhaustive census over F_p for every ordered pair of string complexes
up to a letter bound and every relative shift with Hom_K nonzero, and prints
the pairs whose nonzero maps give more than one cone.

    python3 scripts/cone_survey.py --algebra 1,2,1 --max-letters 3
"""

import argparse
from collections import Counter

from gentle_discrete.algebra import build_lambda
from gentle_discrete.complexes import shift
from gentle_discrete.discreteness import Refusal, cone_census
from gentle_discrete.exactla import Field
from gentle_discrete.homcat import hom_dim_kb
from gentle_discrete.strings import enumerate_homotopy_strings


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algebra", default="1,2,1", help="r,n,m")
    ap.add_argument("--max-letters", type=int, default=3)
    ap.add_argument("--field", type=int, default=2)
    args = ap.parse_args()
    alg = build_lambda(*map(int, args.algebra.split(",")))
    field = Field(args.field)
    strings = enumerate_homotopy_strings(alg, args.max_letters)
    spread = Counter()
    for ha in strings:
        A = ha.realize(field)
        for hb in strings:
            B = hb.realize(field)
            for k in range(B.lo - A.hi, B.hi - A.lo + 1):
                Bk = shift(B, k)
                if hom_dim_kb(A, Bk) == 0:
                    continue
                try:
                    res = cone_census(A, Bk, field)
                except Refusal:
                    spread["refused"] += 1
                    continue
                nz = res.nonzero_classes()
                spread[len(nz)] += 1
                if len(nz) > 1:
                    print(f"{ha} -> {hb} shifted by {k}: Hom_K dim {res.hom_dim}, {len(nz)} cone classes")
                    for cl in nz:
                        print(f"    {cl.nonzero_count:>4} maps  {' + '.join(cl.labels) or '0'}")
    print(f"{alg.name}: pairs by number of nonzero cone classes: {dict(sorted(spread.items(), key=str))}")


if __name__ == "__main__":
    main()
