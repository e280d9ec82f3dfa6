"""Examples outside the gentle engine: truncated tubes and Kronecker modules.

Also assembles the computable cells of the smallness table (hom bounds, cone
finiteness, discreteness) from the engines, each with a pointer to the
computation that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import build_lambda, kronecker
from .exactla import Field, nullspace, rank
from .modules import Module


@dataclass(frozen=True)
class TubeObject:
    """X_i = k[x]/(x^i) in the stable module category of k[x]/(x^n)."""
    n: int
    i: int

    def __post_init__(self):
        if self.n < 2 or not 1 <= self.i <= self.n - 1:
            raise ValueError(f"X_{self.i} is not a nonprojective indecomposable for n={self.n}")


def _shift(field: Field, k: int) -> np.ndarray:
    # x acts on k[x]/(x^k) in the basis 1, x, ..., x^{k-1}
    N = field.zeros((k, k))
    for a in range(k - 1):
        N[a + 1, a] = 1
    return N


def _module_homs(field: Field, i: int, j: int) -> list[np.ndarray]:
    """Basis of Hom_{k[x]}(k[x]/(x^i), k[x]/(x^j)) as j×i matrices."""
    Ni, Nj = _shift(field, i), _shift(field, j)
    # N_j F - F N_i = 0, unknowns F in row-major order
    eqs = field.zeros((j * i, j * i))
    for r in range(j):
        for c in range(i):
            row = r * i + c
            for k in range(j):
                if Nj[r, k]:
                    eqs[row, k * i + c] += Nj[r, k]
            for k in range(i):
                if Ni[k, c]:
                    eqs[row, r * i + k] -= Ni[k, c]
    eqs = field.reduce(eqs)
    return [v.reshape(j, i) for v in nullspace(eqs, field)]


def tube_hom(n: int, i: int, j: int, field: Field | None = None) -> int:
    """dim of stable Hom(X_i, X_j) over k[x]/(x^n).

    Hom(X_i, X_j) modulo the maps factoring through the projective cover
    X_n -> X_j; any map through a projective factors through that cover.
    """
    TubeObject(n, i), TubeObject(n, j)
    field = field or Field(2)
    homs = _module_homs(field, i, j)
    if not homs:
        return 0
    cover = field.zeros((j, n))
    for a in range(j):
        cover[a, a] = 1
    through = [field.matmul(cover, F) for F in _module_homs(field, i, n)]
    full = rank(np.stack([h.reshape(-1) for h in homs]), field)
    proj = rank(np.stack([h.reshape(-1) for h in through]), field) if through else 0
    return full - proj


def tube_hom_bound(n: int, field: Field | None = None) -> int:
    return max(tube_hom(n, i, j, field) for i in range(1, n) for j in range(1, n))


# -- Kronecker ---------------------------------------------------------------------

INFINITY = "inf"


def kronecker_regular(field: Field, lam) -> Module:
    """Dimvec (1,1) module with x acting by 1 and y by λ; λ = ∞ gives x=0, y=1."""
    alg = kronecker()
    if lam == INFINITY or lam == float("inf"):
        xs, ys = 0, 1
    else:
        xs, ys = 1, field.scalar(lam if field.is_finite else Fraction(lam))
    return Module(alg, field, {1: 1, 2: 1}, {"x": [[xs]], "y": [[ys]]})


def kronecker_preprojective(field: Field, k: int) -> Module:
    """Indecomposable with dim 1 = k+1, dim 2 = k: x = [I;0], y = [0;I]."""
    alg = kronecker()
    X, Y = field.zeros((k + 1, k)), field.zeros((k + 1, k))
    for a in range(k):
        X[a, a] = 1
        Y[a + 1, a] = 1
    return Module(alg, field, {1: k + 1, 2: k}, {"x": X, "y": Y})


def kronecker_points(field: Field) -> list:
    """Representatives of the regular (1,1) family: all of P^1 over a finite field."""
    if not field.is_finite:
        raise ValueError("infinitely many points over Q")
    return list(range(field.p)) + [INFINITY]


# -- table -------------------------------------------------------------------------

@dataclass
class TableCell:
    row: str
    column: str
    expected: str
    computed: str
    evidence: str

    @property
    def agrees(self) -> bool:
        return self.expected == self.computed

    def to_json(self) -> dict:
        return {"row": self.row, "column": self.column, "expected": self.expected,
                "computed": self.computed, "agrees": self.agrees, "evidence": self.evidence}


def table_cells(quick: bool = True) -> list[TableCell]:
    """Computable cells of the smallness table at desk scale.

    ``quick`` keeps letter bounds small enough for an interactive run.
    """
    from .discreteness import abelian_fiber, hom_bound_scan, kronecker_family
    from .modules import hom_dim

    cells: list[TableCell] = []
    f2 = Field(2)
    letters = 4 if quick else 6

    # truncated tubes: hom bound floor(n/2), finitely many objects
    for n in range(2, 10):
        b = tube_hom_bound(n)
        cells.append(TableCell("hom bounded", f"tube n={n}", str(n // 2), str(b),
                               f"max over 1<=i,j<n of tube_hom({n},i,j)"))

    # derived-discrete algebras
    for r, n, m, col in ((1, 2, 1, "DDC"), (2, 3, 0, "DDC"), (2, 2, 0, "DDC^c")):
        scan = hom_bound_scan(build_lambda(r, n, m), letters, f2)
        cells.append(TableCell("hom bounded", f"{col} L({r},{n},{m})", "yes",
                               "yes" if scan.max_dim <= 2 else "no",
                               f"hom_bound_scan over F2, {letters} letters: max dim {scan.max_dim}"))

    # Kronecker over F_q: abelian fibre of (1,1) has q+1 classes
    alg = kronecker()
    for p in (2, 3):
        fib = abelian_fiber(alg, (1, 1), Field(p))
        cells.append(TableCell("discrete hearts", f"F{p} Kronecker", str(p + 1), str(len(fib)),
                               "abelian_fiber((1,1)) by string walks plus orbit enumeration"))

    # Kronecker over Q: an infinite family of (1,1) indecomposables, unbounded homs
    count = 10 if quick else 25
    fam, proofs = kronecker_family(Field(None), count)
    ok = all(a == 0 and b == 0 for _, a, b in proofs)
    cells.append(TableCell("H-discrete", "Q Kronecker", "no",
                           "no" if ok else "undetermined",
                           f"{count} pairwise non-isomorphic R_lambda of dimvec (1,1)"))
    proj2 = Module(alg, Field(None), {1: 2, 2: 1}, {"x": [[1], [0]], "y": [[0], [1]]})
    dims = [hom_dim(proj2, kronecker_preprojective(Field(None), k)) for k in range(1, 6)]
    grows = all(d == k for d, k in zip(dims, range(1, 6)))
    cells.append(TableCell("hom bounded", "Q Kronecker", "no", "no" if grows else "undetermined",
                           f"dim Hom(P(2), preprojective_k) = {dims} for k = 1..5"))
    return cells
