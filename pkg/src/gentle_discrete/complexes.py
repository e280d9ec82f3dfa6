"""Bounded complexes of projectives over a gentle algebra.

Grading is cohomological (differentials raise degree).  The shift satisfies
``(ΣC)^i = C^{i+1}`` with differential ``-d``.

A map between direct sums of indecomposable projectives
``⊕_s P(v_s) -> ⊕_t P(w_t)`` is stored as an array ``F`` of shape
``(T, S, N)`` where ``N`` is the number of nonzero paths: ``F[t, s, k]`` is the
coefficient of path ``k`` (a path from ``w_t`` to ``v_s``) in the component
``P(v_s) -> P(w_t)``.  Evaluation to matrices over the field happens only when
a computation needs the underlying vector spaces (cohomology).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .algebra import GentlePresentation, PathAlgebra, from_json
from .exactla import Field, rank

ProfileKey = tuple  # tuple of (degree, tuple(dimvec)) with nonzero entries, sorted


class ComplexError(ValueError):
    pass


# -- graded projective maps ---------------------------------------------------

def hom_mask(pa: PathAlgebra, targets: tuple, sources: tuple) -> np.ndarray:
    """Boolean (T, S, N): which paths may occur in each component."""
    vi = pa.pres.vertex_index
    tw = np.array([vi[w] for w in targets], dtype=np.int64).reshape(-1, 1, 1)
    sv = np.array([vi[v] for v in sources], dtype=np.int64).reshape(1, -1, 1)
    return (pa.src.reshape(1, 1, -1) == tw) & (pa.tgt.reshape(1, 1, -1) == sv)


def compose(field: Field, pa: PathAlgebra, g: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Graded map ``g ∘ f`` (apply f first); leading batch axes allowed on f or g."""
    if g.shape[-2] != f.shape[-3]:
        raise ComplexError("graded maps are not composable")
    if g.shape[-3] == 0 or f.shape[-2] == 0 or g.shape[-2] == 0:
        batch = np.broadcast_shapes(g.shape[:-3], f.shape[:-3])
        return field.zeros(batch + (g.shape[-3], f.shape[-2], pa.n))
    # g's path comes first in the composite path; sum over the nonzero
    # products p·q = r of the multiplication table only
    G = np.moveaxis(g[..., pa.tri_p], -1, -3)
    Fq = np.moveaxis(f[..., pa.tri_q], -1, -3)
    prod = np.moveaxis(G @ Fq, -3, -1)
    if field.p is not None:
        prod %= field.p
    out = field.zeros(prod.shape[:-1] + (pa.n,))
    for r, ks in pa.tri_groups:
        out[..., r] = prod[..., ks].sum(axis=-1)
    return field.reduce(out)


def identity_map(field: Field, pa: PathAlgebra, terms: tuple) -> np.ndarray:
    n = len(terms)
    out = field.zeros((n, n, pa.n))
    for j, v in enumerate(terms):
        out[j, j, pa.trivial[v]] = 1
    return out


def evaluate_map(field: Field, pa: PathAlgebra, targets: tuple, sources: tuple,
                 F: np.ndarray) -> np.ndarray:
    """Matrix over the field of a graded projective map on the underlying spaces."""
    rows = [pa.proj_dim(w) for w in targets]
    cols = [pa.proj_dim(v) for v in sources]
    M = field.zeros((sum(rows), sum(cols)))
    r0 = 0
    for t, w in enumerate(targets):
        c0 = 0
        for s, v in enumerate(sources):
            for k in np.flatnonzero(F[t, s] != 0):
                M[r0:r0 + rows[t], c0:c0 + cols[s]] += F[t, s, k] * field.array(
                    pa.path_map_matrix(int(k), v, w))
            c0 += cols[s]
        r0 += rows[t]
    return field.reduce(M)


def space_vertex_labels(pa: PathAlgebra, terms: tuple) -> np.ndarray:
    """Vertex index (target of the basis path) of each basis vector of ⊕P(v)."""
    out = []
    for v in terms:
        out.extend(int(pa.tgt[k]) for k in pa.proj_basis[v])
    return np.array(out, dtype=np.int64)


def top_part(pa: PathAlgebra, F: np.ndarray, targets: tuple, sources: tuple) -> np.ndarray:
    """Scalar matrix of trivial-path coefficients (zero between distinct vertices)."""
    T, S = len(targets), len(sources)
    out = np.zeros((T, S), dtype=F.dtype) if F.dtype != object else np.empty((T, S), dtype=object)
    for t, w in enumerate(targets):
        for s, v in enumerate(sources):
            out[t, s] = F[t, s, pa.trivial[v]] if v == w else 0
    return out


# -- complexes ----------------------------------------------------------------

class ProjComplex:
    """Immutable bounded complex of indecomposable projectives."""

    __slots__ = ("algebra", "field", "terms", "diffs", "__dict__")

    def __init__(self, algebra: GentlePresentation, field: Field,
                 terms: Mapping[int, Iterable], diffs: Mapping[int, np.ndarray] | None = None):
        self.algebra = algebra
        self.field = field
        t = {int(d): tuple(vs) for d, vs in terms.items() if len(tuple(vs))}
        self.terms: dict[int, tuple] = dict(sorted(t.items()))
        pa = algebra.compiled
        dd = {}
        for d, arr in (diffs or {}).items():
            d = int(d)
            if d in self.terms and d + 1 in self.terms:
                a = field.reduce(np.asarray(arr, dtype=field.dtype)).copy()
                exp = (len(self.terms[d + 1]), len(self.terms[d]), pa.n)
                if a.shape != exp:
                    raise ComplexError(f"differential in degree {d} has shape {a.shape}, expected {exp}")
                if field.p is None and a.size:
                    a = np.vectorize(_frac, otypes=[object])(a)
                a.setflags(write=False)
                if np.any(a != 0):
                    dd[d] = a
        self.diffs: dict[int, np.ndarray] = dict(sorted(dd.items()))

    @property
    def pa(self) -> PathAlgebra:
        return self.algebra.compiled

    @property
    def degrees(self) -> list[int]:
        return list(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def lo(self) -> int | None:
        return min(self.terms) if self.terms else None

    @property
    def hi(self) -> int | None:
        return max(self.terms) if self.terms else None

    def term(self, d: int) -> tuple:
        return self.terms.get(d, ())

    def d(self, i: int) -> np.ndarray:
        """Differential C^i -> C^{i+1} as a (T, S, N) array (zeros if absent)."""
        if i in self.diffs:
            return self.diffs[i]
        return self.field.zeros((len(self.term(i + 1)), len(self.term(i)), self.pa.n))

    def num_terms(self) -> int:
        return sum(len(v) for v in self.terms.values())

    def term_profile(self) -> dict[int, tuple]:
        return {d: tuple(sorted(vs, key=self.algebra.vertex_index.get)) for d, vs in self.terms.items()}

    def __repr__(self) -> str:
        parts = []
        for d, vs in self.terms.items():
            parts.append(f"{d}:" + "+".join(f"P({v})" for v in vs))
        return f"ProjComplex[{self.algebra.name} {self.field}; {', '.join(parts) or '0'}]"

    def same_as(self, other: "ProjComplex") -> bool:
        """Equality of the stored data (not isomorphism)."""
        if self.terms != other.terms or set(self.diffs) != set(other.diffs):
            return False
        return all(np.array_equal(self.diffs[d], other.diffs[d]) for d in self.diffs)

    @cached_property
    def evaluated(self) -> dict[int, np.ndarray]:
        pa = self.pa
        return {d: evaluate_map(self.field, pa, self.term(d + 1), self.term(d), a)
                for d, a in self.diffs.items()}

    def with_field(self, field: Field) -> "ProjComplex":
        return ProjComplex(self.algebra, field, self.terms,
                           {d: np.vectorize(field.scalar, otypes=[object])(a).astype(field.dtype)
                            if a.size else a for d, a in self.diffs.items()})


def _frac(x):
    from fractions import Fraction
    return Fraction(x)


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    degree: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_complex(C: ProjComplex) -> CheckReport:
    """Verify that entries are legal paths and d ∘ d = 0 in every degree."""
    pa = C.pa
    for d, arr in C.diffs.items():
        mask = hom_mask(pa, C.term(d + 1), C.term(d))
        if np.any((arr != 0) & ~mask):
            return CheckReport(False, d, f"differential in degree {d} uses non-composable paths")
    for d in C.diffs:
        if d + 1 in C.diffs:
            dd = compose(C.field, pa, C.diffs[d + 1], C.diffs[d])
            if not C.field.is_zero(dd):
                return CheckReport(False, d, f"d^{d + 1} ∘ d^{d} != 0")
    return CheckReport(True)


def stalk(algebra: GentlePresentation, field: Field, vertices: Iterable, degree: int = 0) -> ProjComplex:
    return ProjComplex(algebra, field, {degree: tuple(vertices)})


def zero_complex(algebra: GentlePresentation, field: Field) -> ProjComplex:
    return ProjComplex(algebra, field, {})


def shift(C: ProjComplex, k: int) -> ProjComplex:
    """Σ^k C with (Σ^k C)^i = C^{i+k} and differential (-1)^k d."""
    sign = -1 if k % 2 else 1
    return ProjComplex(C.algebra, C.field,
                       {d - k: vs for d, vs in C.terms.items()},
                       {d - k: C.field.reduce(sign * a) for d, a in C.diffs.items()})


def direct_sum(*cs: ProjComplex) -> ProjComplex:
    if not cs:
        raise ComplexError("direct_sum of nothing")
    alg, field = cs[0].algebra, cs[0].field
    degs = sorted({d for c in cs for d in c.terms})
    terms = {d: tuple(v for c in cs for v in c.term(d)) for d in degs}
    pa = alg.compiled
    diffs = {}
    for d in degs:
        if d + 1 not in terms:
            continue
        out = field.zeros((len(terms[d + 1]), len(terms[d]), pa.n))
        r0 = c0 = 0
        for c in cs:
            T, S = len(c.term(d + 1)), len(c.term(d))
            if d in c.diffs:
                out[r0:r0 + T, c0:c0 + S] = c.diffs[d]
            r0 += T
            c0 += S
        diffs[d] = out
    return ProjComplex(alg, field, terms, diffs)


# -- chain maps ---------------------------------------------------------------

class ChainMap:
    """Degree-wise graded maps ``source^i -> target^i``."""

    def __init__(self, source: ProjComplex, target: ProjComplex, comps: Mapping[int, np.ndarray]):
        self.source = source
        self.target = target
        f = source.field
        self.comps: dict[int, np.ndarray] = {}
        for d, a in comps.items():
            if d in source.terms and d in target.terms:
                self.comps[int(d)] = f.reduce(np.asarray(a, dtype=f.dtype))

    @property
    def field(self) -> Field:
        return self.source.field

    def comp(self, d: int) -> np.ndarray:
        if d in self.comps:
            return self.comps[d]
        return self.field.zeros((len(self.target.term(d)), len(self.source.term(d)), self.source.pa.n))

    def degrees(self) -> list[int]:
        return sorted(set(self.source.terms) & set(self.target.terms))

    def is_chain_map(self) -> bool:
        s, t, f = self.source, self.target, self.field
        pa = s.pa
        for d in sorted(set(s.terms) | set(t.terms)):
            lhs = compose(f, pa, t.d(d), self.comp(d))
            rhs = compose(f, pa, self.comp(d + 1), s.d(d))
            if not f.is_zero(f.reduce(lhs - rhs)):
                return False
        return True

    def is_zero(self) -> bool:
        return all(self.field.is_zero(a) for a in self.comps.values())

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """``self ∘ other``."""
        pa = self.source.pa
        comps = {d: compose(self.field, pa, self.comp(d), other.comp(d))
                 for d in other.degrees() if d in self.target.terms}
        return ChainMap(other.source, self.target, comps)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        degs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target,
                        {d: self.field.reduce(self.comp(d) + other.comp(d)) for d in degs})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + other.scale(-1)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {d: self.field.reduce(c * a) for d, a in self.comps.items()})

    def equals(self, other: "ChainMap") -> bool:
        return (self - other).is_zero()

    @classmethod
    def identity(cls, C: ProjComplex) -> "ChainMap":
        return cls(C, C, {d: identity_map(C.field, C.pa, vs) for d, vs in C.terms.items()})

    @classmethod
    def zero(cls, A: ProjComplex, B: ProjComplex) -> "ChainMap":
        return cls(A, B, {})

    def top(self, d: int) -> np.ndarray:
        return top_part(self.source.pa, self.comp(d), self.target.term(d), self.source.term(d))


# -- cones --------------------------------------------------------------------

@dataclass
class Triangle:
    """A --f--> B --incl--> cone(f) --proj--> ΣA."""

    f: ChainMap
    cone: ProjComplex
    incl: ChainMap
    proj: ChainMap


def cone_triangle(f: ChainMap) -> Triangle:
    A, B, field = f.source, f.target, f.field
    pa = A.pa
    degs = sorted({d - 1 for d in A.terms} | set(B.terms))
    terms = {i: A.term(i + 1) + B.term(i) for i in degs}
    diffs = {}
    for i in degs:
        if i + 1 not in terms:
            continue
        a1, a2 = len(A.term(i + 1)), len(A.term(i + 2))
        b0, b1 = len(B.term(i)), len(B.term(i + 1))
        out = field.zeros((a2 + b1, a1 + b0, pa.n))
        out[:a2, :a1] = field.reduce(-A.d(i + 1))
        out[a2:, :a1] = f.comp(i + 1)
        out[a2:, a1:] = B.d(i)
        diffs[i] = out
    cone = ProjComplex(A.algebra, field, terms, diffs)
    sA = shift(A, 1)
    incl, proj = {}, {}
    for i in degs:
        a1, b0 = len(A.term(i + 1)), len(B.term(i))
        if b0:
            m = field.zeros((a1 + b0, b0, pa.n))
            m[a1:] = identity_map(field, pa, B.term(i))
            incl[i] = m
        if a1:
            m = field.zeros((a1, a1 + b0, pa.n))
            m[:, :a1] = identity_map(field, pa, A.term(i + 1))
            proj[i] = m
    return Triangle(f, cone, ChainMap(B, cone, incl), ChainMap(cone, sA, proj))


def cone(f: ChainMap) -> ProjComplex:
    return cone_triangle(f).cone


# -- cohomology ---------------------------------------------------------------

def _vertex_blocks(C: ProjComplex, d: int) -> np.ndarray:
    return space_vertex_labels(C.pa, C.term(d))


def cohomology_profile(C: ProjComplex) -> dict[int, np.ndarray]:
    """Dimension vector of H^i(C) for every degree with nonzero cohomology."""
    if not check_complex(C):
        raise ComplexError("malformed complex")
    field, nv = C.field, len(C.algebra.vertices)
    ev = C.evaluated
    out = {}
    labels = {d: _vertex_blocks(C, d) for d in C.terms}
    for d in C.terms:
        vec = np.zeros(nv, dtype=np.int64)
        for u in range(nv):
            here = np.flatnonzero(labels[d] == u)
            if here.size == 0:
                continue
            dim = here.size
            if d in ev:
                nxt = np.flatnonzero(labels[d + 1] == u)
                dim -= rank(ev[d][np.ix_(nxt, here)], field) if nxt.size else 0
            if d - 1 in ev:
                prv = np.flatnonzero(labels[d - 1] == u)
                dim -= rank(ev[d - 1][np.ix_(here, prv)], field) if prv.size else 0
            vec[u] = dim
        if vec.any():
            out[d] = vec
    return out


def profile_key(profile: Mapping[int, np.ndarray | Iterable[int]]) -> ProfileKey:
    return tuple(sorted((int(d), tuple(int(x) for x in v)) for d, v in profile.items() if any(v)))


def normalize_profile(key: ProfileKey) -> tuple[int, ProfileKey]:
    """Shift so the lowest degree is 0; returns (offset, key)."""
    if not key:
        return 0, key
    lo = key[0][0]
    return lo, tuple((d - lo, v) for d, v in key)


def profile_mass(key: ProfileKey) -> int:
    return sum(sum(v) for _, v in key)


def term_profile_key(C: ProjComplex) -> tuple:
    return tuple((d, vs) for d, vs in C.term_profile().items())


def k0_class(C: ProjComplex) -> np.ndarray:
    nv = len(C.algebra.vertices)
    out = np.zeros(nv, dtype=np.int64)
    for d, v in cohomology_profile(C).items():
        out += (-1) ** (d % 2) * v
    return out


def k0_class_from_terms(C: ProjComplex) -> np.ndarray:
    pa = C.pa
    out = np.zeros(len(C.algebra.vertices), dtype=np.int64)
    for d, vs in C.terms.items():
        for v in vs:
            out += (-1) ** (d % 2) * pa.proj_dimvec(v)
    return out


# -- minimal models -----------------------------------------------------------

def _local_inverse(field: Field, pa: PathAlgebra, phi: np.ndarray, v) -> np.ndarray:
    # phi = lam * (e + rho), rho radical => phi^{-1} = lam^{-1} sum_k (-rho)^k
    lam = phi[0, 0, pa.trivial[v]]
    linv = field.inv(lam)
    e = identity_map(field, pa, (v,))
    rho = field.reduce(linv * phi - e)
    out = e.copy()
    term = e.copy()
    for _ in range(pa.max_path_length + 1):
        term = field.reduce(-compose(field, pa, rho, term))
        if field.is_zero(term):
            break
        out = field.reduce(out + term)
    return field.reduce(linv * out)


@dataclass
class MinimalModel:
    complex: ProjComplex
    to_min: ChainMap      # original -> minimal
    from_min: ChainMap    # minimal -> original


def _find_pivot(C_terms, C_diffs, pa):
    for d in sorted(C_diffs):
        arr = C_diffs[d]
        src, tgt = C_terms[d], C_terms[d + 1]
        for t, w in enumerate(tgt):
            for s, v in enumerate(src):
                if v == w and arr[t, s, pa.trivial[v]] != 0:
                    return d, t, s
    return None


def minimize(C: ProjComplex, with_maps: bool = True) -> MinimalModel | ProjComplex:
    """Cancel differential entries with invertible scalar part until radical.

    Returns a :class:`MinimalModel` with homotopy-inverse witness maps, or just
    the minimal complex when ``with_maps`` is false.
    """
    field, pa = C.field, C.pa
    terms = {d: list(vs) for d, vs in C.terms.items()}
    diffs = {d: np.array(a) for d, a in C.diffs.items()}
    degs_all = sorted(terms)
    pi = {d: identity_map(field, pa, tuple(terms[d])) for d in degs_all}
    io = {d: identity_map(field, pa, tuple(terms[d])) for d in degs_all}
    while True:
        piv = _find_pivot(terms, diffs, pa)
        if piv is None:
            break
        i, t, s = piv
        v = terms[i][s]
        D = diffs[i]
        phi = D[t:t + 1, s:s + 1]
        phinv = _local_inverse(field, pa, phi, v)
        keep_s = [j for j in range(len(terms[i])) if j != s]
        keep_t = [j for j in range(len(terms[i + 1])) if j != t]
        beta = D[t:t + 1][:, keep_s]
        gamma = D[keep_t][:, s:s + 1]
        delta = D[keep_t][:, keep_s]
        gphi = compose(field, pa, gamma, phinv)
        phib = compose(field, pa, phinv, beta)
        new_d = field.reduce(delta - compose(field, pa, gphi, beta))
        # step maps: original -> reduced (p) and reduced -> original (j)
        n_i, n_i1 = len(terms[i]), len(terms[i + 1])
        p_i = field.zeros((n_i - 1, n_i, pa.n))
        p_i[:, keep_s] = identity_map(field, pa, tuple(terms[i][j] for j in keep_s))
        p_i1 = field.zeros((n_i1 - 1, n_i1, pa.n))
        p_i1[:, keep_t] = identity_map(field, pa, tuple(terms[i + 1][j] for j in keep_t))
        p_i1[:, t:t + 1] = field.reduce(-gphi)
        j_i = field.zeros((n_i, n_i - 1, pa.n))
        j_i[keep_s] = identity_map(field, pa, tuple(terms[i][j] for j in keep_s))
        j_i[s:s + 1] = field.reduce(-phib)
        j_i1 = field.zeros((n_i1, n_i1 - 1, pa.n))
        j_i1[keep_t] = identity_map(field, pa, tuple(terms[i + 1][j] for j in keep_t))
        pi[i] = compose(field, pa, p_i, pi[i])
        pi[i + 1] = compose(field, pa, p_i1, pi[i + 1])
        io[i] = compose(field, pa, io[i], j_i)
        io[i + 1] = compose(field, pa, io[i + 1], j_i1)
        diffs[i] = new_d
        if i - 1 in diffs:
            diffs[i - 1] = diffs[i - 1][keep_s]
        if i + 1 in diffs:
            diffs[i + 1] = diffs[i + 1][:, keep_t]
        terms[i] = [terms[i][j] for j in keep_s]
        terms[i + 1] = [terms[i + 1][j] for j in keep_t]
        for d in (i, i + 1):
            if not terms[d]:
                diffs.pop(d, None)
                diffs.pop(d - 1, None)
        diffs = {d: a for d, a in diffs.items() if terms.get(d) and terms.get(d + 1) and a.size}
    M = ProjComplex(C.algebra, field, terms, diffs)
    if not with_maps:
        return M
    to_min = ChainMap(C, M, {d: pi[d] for d in degs_all if terms[d]})
    from_min = ChainMap(M, C, {d: io[d] for d in degs_all if terms[d]})
    return MinimalModel(M, to_min, from_min)


def minimal(C: ProjComplex) -> ProjComplex:
    return minimize(C, with_maps=False)


def is_radical(C: ProjComplex) -> bool:
    return _find_pivot(C.terms, C.diffs, C.pa) is None


# -- serialization ------------------------------------------------------------

def complex_to_json(C: ProjComplex, include_algebra: bool = True) -> dict:
    alg, pa, field = C.algebra, C.pa, C.field
    out = {
        "field": str(field),
        "degrees": {str(d): [f"P({v})" for v in vs] for d, vs in C.terms.items()},
        "differentials": {},
    }
    if include_algebra:
        out["algebra"] = alg.to_json()
    for d, a in C.diffs.items():
        rows = []
        for t in range(a.shape[0]):
            row = []
            for s in range(a.shape[1]):
                entry = [{"path": alg.path_str(pa.paths[k]), "coeff": field.to_json(a[t, s, k])}
                         for k in np.flatnonzero(a[t, s] != 0)]
                row.append(entry)
            rows.append(row)
        out["differentials"][str(d)] = rows
    return out


def _parse_term(alg: GentlePresentation, text: str):
    text = text.strip()
    if text.startswith("P(") and text.endswith(")"):
        text = text[2:-1]
    for v in alg.vertices:
        if str(v) == text:
            return v
    raise ComplexError(f"unknown projective {text!r}")


def complex_from_json(data: dict, algebra: GentlePresentation | None = None) -> ProjComplex:
    alg = algebra if algebra is not None else from_json(data["algebra"])
    field = Field.parse(data.get("field", "F2"))
    pa = alg.compiled
    terms = {int(d): tuple(_parse_term(alg, x) for x in vs) for d, vs in data["degrees"].items()}
    diffs = {}
    for d, rows in data.get("differentials", {}).items():
        d = int(d)
        arr = field.zeros((len(terms.get(d + 1, ())), len(terms.get(d, ())), pa.n))
        for t, row in enumerate(rows):
            for s, entry in enumerate(row):
                for item in entry:
                    k = pa.index[alg.parse_path(item["path"])]
                    arr[t, s, k] = field.reduce(arr[t, s, k] + field.parse_scalar(item.get("coeff", "1")))
        diffs[d] = arr
    C = ProjComplex(alg, field, terms, diffs)
    rep = check_complex(C)
    if not rep:
        raise ComplexError(rep.message)
    return C


def dumps(C: ProjComplex) -> str:
    return json.dumps(complex_to_json(C), sort_keys=True)


def loads(text: str, algebra: GentlePresentation | None = None) -> ProjComplex:
    return complex_from_json(json.loads(text), algebra)


def build_complex(algebra: GentlePresentation, field: Field, terms: Mapping[int, Iterable],
                  entries: Iterable[tuple[int, int, int, str, object]] = ()) -> ProjComplex:
    """Convenience constructor: entries are (degree, target idx, source idx, path, coeff)."""
    pa = algebra.compiled
    terms = {d: tuple(vs) for d, vs in terms.items()}
    diffs: dict[int, np.ndarray] = {}
    for d, t, s, path, c in entries:
        if d not in diffs:
            diffs[d] = field.zeros((len(terms[d + 1]), len(terms[d]), pa.n))
        k = pa.index[algebra.parse_path(path)]
        diffs[d][t, s, k] = field.reduce(diffs[d][t, s, k] + field.scalar(c))
    return ProjComplex(algebra, field, terms, diffs)


def multiset_key(C: ProjComplex) -> tuple:
    return tuple((d, tuple(sorted(Counter(vs).items(), key=lambda kv: C.algebra.vertex_index[kv[0]])))
                 for d, vs in C.terms.items())
