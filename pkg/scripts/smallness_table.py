"""Print the computable cells of the smallness table with their evidence.

    python3 scripts/smallness_table.py [--full]
"""

import argparse

from gentle_discrete.zoo import table_cells


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--full", action="store_true", help="larger letter bounds")
    args = ap.parse_args()
    cells = table_cells(quick=not args.full)
    print("| row | column | expected | computed | agrees | evidence |")
    print("|---|---|---|---|---|---|")
    for c in cells:
        print(f"| {c.row} | {c.column} | {c.expected} | {c.computed} | {'yes' if c.agrees else 'NO'} | {c.evidence} |")


if __name__ == "__main__":
    main()
