"""Hom spaces, decomposition and isomorphism in the homotopy category.

Chain maps ``A -> B`` are solutions of ``d_B f - f d_A = 0`` with one unknown
per admissible path coefficient; null-homotopic maps are the image of
``h -> d_B h + h d_A``.  On a minimal complex the null-homotopic endomorphisms
form a nilpotent ideal, so idempotents of the homotopy endomorphism ring lift
to strict chain idempotents and the complex splits degree-wise.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .algebra import GentlePresentation, PathAlgebra
from .complexes import (ChainMap, ComplexError, ProjComplex, compose, dumps, hom_mask,
                        minimize, top_part)
from .endo import DEFAULT_BUDGET, BudgetExceeded, TopAlgebra
from .exactla import Field, independent_rows, inverse, is_invertible, nullspace, rank, rref


class DecompositionError(RuntimeError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


# -- linear systems for chain maps ---------------------------------------------

class _Vars:
    """Unknown path coefficients of graded maps A^i -> B^{i+shift}."""

    def __init__(self, pa: PathAlgebra, A: ProjComplex, B: ProjComplex, shift: int = 0):
        self.pos: dict[int, np.ndarray] = {}
        self.off: dict[int, int] = {}
        o = 0
        for i in A.terms:
            if i + shift in B.terms:
                p = np.argwhere(hom_mask(pa, B.term(i + shift), A.term(i)))
                if len(p):
                    self.pos[i] = p
                    self.off[i] = o
                    o += len(p)
        self.n = o
        self.A, self.B, self.shift = A, B, shift

    def units(self, field: Field, pa: PathAlgebra, i: int) -> np.ndarray:
        p = self.pos[i]
        E = field.zeros((len(p), len(self.B.term(i + self.shift)), len(self.A.term(i)), pa.n))
        E[np.arange(len(p)), p[:, 0], p[:, 1], p[:, 2]] = 1
        return E

    def gather(self, i: int, arr: np.ndarray) -> np.ndarray:
        """Coordinates of a batch of degree-i maps at this variable set."""
        p = self.pos[i]
        return arr[..., p[:, 0], p[:, 1], p[:, 2]]

    def scatter(self, field: Field, pa: PathAlgebra, x: np.ndarray) -> dict[int, np.ndarray]:
        out = {}
        for i, p in self.pos.items():
            a = field.zeros((len(self.B.term(i + self.shift)), len(self.A.term(i)), pa.n))
            a[p[:, 0], p[:, 1], p[:, 2]] = x[self.off[i]:self.off[i] + len(p)]
            out[i] = a
        return out


def _commutation_matrix(A: ProjComplex, B: ProjComplex, V: _Vars) -> np.ndarray:
    field, pa = A.field, A.pa
    blocks_rows = []
    for i in sorted(set(A.terms) | set(B.terms)):
        # equation at degree i: d_B^i f^i - f^{i+1} d_A^i : A^i -> B^{i+1}
        if not A.term(i) or not B.term(i + 1):
            continue
        T, S = len(B.term(i + 1)), len(A.term(i))
        row = field.zeros((T * S * pa.n, V.n))
        used = False
        if i in V.pos and i in B.diffs:
            E = V.units(field, pa, i)
            img = compose(field, pa, B.diffs[i], E).reshape(len(E), -1)
            row[:, V.off[i]:V.off[i] + len(E)] += img.T
            used = True
        if i + 1 in V.pos and i in A.diffs:
            E = V.units(field, pa, i + 1)
            img = compose(field, pa, E, A.diffs[i]).reshape(len(E), -1)
            row[:, V.off[i + 1]:V.off[i + 1] + len(E)] -= img.T
            used = True
        if used:
            keep = np.flatnonzero(np.any(row != 0, axis=1))
            if keep.size:
                blocks_rows.append(field.reduce(row[keep]))
    if not blocks_rows:
        return field.zeros((0, V.n))
    return np.vstack(blocks_rows)


def _homotopy_images(A: ProjComplex, B: ProjComplex, V: _Vars) -> np.ndarray:
    """Rows: null-homotopic maps d_B h + h d_A for unit homotopies h, in V coordinates."""
    field, pa = A.field, A.pa
    H = _Vars(pa, A, B, shift=-1)
    rows = []
    for i in H.pos:
        E = H.units(field, pa, i)   # h^i: A^i -> B^{i-1}
        parts = field.zeros((len(E), V.n))
        if i - 1 in B.diffs and i in V.pos:
            # contributes d_B^{i-1} h^i to f^i
            img = compose(field, pa, B.diffs[i - 1], E)
            parts[:, V.off[i]:V.off[i] + len(V.pos[i])] += V.gather(i, img)
        if i - 1 in A.diffs and i - 1 in V.pos:
            # contributes h^i d_A^{i-1} to f^{i-1}
            img = compose(field, pa, E, A.diffs[i - 1])
            parts[:, V.off[i - 1]:V.off[i - 1] + len(V.pos[i - 1])] += V.gather(i - 1, img)
        rows.append(field.reduce(parts))
    if not rows:
        return field.zeros((0, V.n))
    return np.vstack(rows)


@dataclass
class HomSpace:
    source: ProjComplex
    target: ProjComplex
    chain_basis: list            # ChainMap basis of all chain maps
    null_dim: int                # dimension of the null-homotopic subspace
    quotient_basis: list         # chain maps whose classes form a basis of Hom_K

    @property
    def dim(self) -> int:
        return len(self.chain_basis) - self.null_dim


def _check_same(A: ProjComplex, B: ProjComplex) -> None:
    if A.algebra is not B.algebra and A.algebra != B.algebra:
        raise ComplexError("complexes over different algebras")
    if A.field != B.field:
        raise ComplexError("complexes over different fields")


def chain_map_basis(A: ProjComplex, B: ProjComplex) -> list[ChainMap]:
    _check_same(A, B)
    pa, field = A.pa, A.field
    V = _Vars(pa, A, B)
    if V.n == 0:
        return []
    K = nullspace(_commutation_matrix(A, B, V), field)
    return [ChainMap(A, B, V.scatter(field, pa, k)) for k in K]


def hom_space(A: ProjComplex, B: ProjComplex) -> HomSpace:
    _check_same(A, B)
    pa, field = A.pa, A.field
    V = _Vars(pa, A, B)
    if V.n == 0:
        return HomSpace(A, B, [], 0, [])
    K = nullspace(_commutation_matrix(A, B, V), field)
    Hm = _homotopy_images(A, B, V)
    null = rank(Hm, field) if Hm.shape[0] else 0
    picked = independent_rows(K, field, Hm if Hm.shape[0] else None) if len(K) else []
    basis = [ChainMap(A, B, V.scatter(field, pa, k)) for k in K]
    quot = [basis[i] for i in picked]
    return HomSpace(A, B, basis, null, quot)


def hom_dim_kb(A: ProjComplex, B: ProjComplex) -> int:
    """dim Hom_K(A, B) = dim(chain maps) - dim(null-homotopic maps)."""
    _check_same(A, B)
    pa, field = A.pa, A.field
    V = _Vars(pa, A, B)
    if V.n == 0:
        return 0
    D = _commutation_matrix(A, B, V)
    z = V.n - (rank(D, field) if D.shape[0] else 0)
    if z == 0:
        return 0
    Hm = _homotopy_images(A, B, V)
    return z - (rank(Hm, field) if Hm.shape[0] else 0)


def chain_dim_upper_bound(A: ProjComplex, B: ProjComplex) -> int:
    """Number of unknowns; an upper bound for dim Hom_K(A, B)."""
    return _Vars(A.pa, A, B).n


def is_null_homotopic(f: ChainMap) -> bool:
    A, B = f.source, f.target
    pa, field = A.pa, A.field
    V = _Vars(pa, A, B)
    if V.n == 0:
        return True
    x = np.concatenate([V.gather(i, f.comp(i)) for i in sorted(V.pos, key=V.off.get)]) if V.pos else field.zeros(0)
    Hm = _homotopy_images(A, B, V)
    if Hm.shape[0] == 0:
        return field.is_zero(x)
    return rank(np.vstack([Hm, x.reshape(1, -1)]), field) == rank(Hm, field)


def is_contractible(C: ProjComplex) -> bool:
    return minimize(C, with_maps=False).is_zero


# -- tops and graded inverses --------------------------------------------------

def chain_top(f: ChainMap) -> np.ndarray:
    """Block-diagonal scalar matrix of trivial-path coefficients over all degrees."""
    field = f.field
    src = [d for d in f.source.terms]
    tgt = [d for d in f.target.terms]
    rows = sum(len(f.target.term(d)) for d in tgt)
    cols = sum(len(f.source.term(d)) for d in src)
    out = field.zeros((rows, cols))
    r0 = {d: o for d, o in zip(tgt, np.cumsum([0] + [len(f.target.term(d)) for d in tgt])[:-1])}
    c0 = {d: o for d, o in zip(src, np.cumsum([0] + [len(f.source.term(d)) for d in src])[:-1])}
    for d in f.degrees():
        T = f.top(d)
        out[r0[d]:r0[d] + T.shape[0], c0[d]:c0[d] + T.shape[1]] = T
    return out


def graded_inverse(field: Field, pa: PathAlgebra, M: np.ndarray, terms: tuple) -> np.ndarray:
    """Inverse of an endomorphism of ⊕P(v) whose top is invertible."""
    T = top_part(pa, M, terms, terms)
    Tinv = inverse(T, field)
    n = len(terms)
    Ti = field.zeros((n, n, pa.n))
    for t in range(n):
        for s in range(n):
            if Tinv[t, s] != 0:
                Ti[t, s, pa.trivial[terms[s]]] = Tinv[t, s]
    R = field.reduce(M - _embed_top(field, pa, T, terms))
    N = field.reduce(-compose(field, pa, Ti, R))
    out = Ti.copy()
    term = Ti.copy()
    for _ in range(pa.max_path_length + 1):
        term = compose(field, pa, N, term)
        if field.is_zero(term):
            break
        out = field.reduce(out + term)
    return out


def _embed_top(field, pa, T, terms):
    n = len(terms)
    out = field.zeros((n, n, pa.n))
    for t in range(n):
        for s in range(n):
            if T[t, s] != 0:
                out[t, s, pa.trivial[terms[s]]] = T[t, s]
    return out


# -- decomposition ---------------------------------------------------------------

@dataclass
class Summand:
    complex: ProjComplex
    incl: ChainMap          # summand -> minimal model
    proj: ChainMap          # minimal model -> summand
    label: tuple | None = None   # (canonical string, degree of its first vertex)

    def label_text(self) -> str:
        if self.label is None:
            return "non-string " + repr(self.complex)
        return f"{self.label[0]}@{self.label[1]}"


@dataclass
class DecompositionReport:
    source: ProjComplex
    minimal: ProjComplex
    summands: list = dc_field(default_factory=list)

    def classes(self) -> list[tuple]:
        """(label or None, representative complex, multiplicity), canonically ordered."""
        groups: list[list] = []
        for s in self.summands:
            for g in groups:
                if s.label is not None and g[0].label == s.label:
                    g.append(s)
                    break
                if s.label is None and g[0].label is None and \
                        iso_indecomposable(s.complex, g[0].complex) is not None:
                    g.append(s)
                    break
            else:
                groups.append([s])
        out = [(g[0].label, g[0].complex, len(g)) for g in groups]
        out.sort(key=lambda x: (x[0] is None, x[0] or ("",), repr(x[1])))
        return out

    def key(self) -> tuple:
        """Multiset of labels; only meaningful when every summand is a string."""
        return tuple(sorted((s.label for s in self.summands), key=lambda l: (l is None, l or ("", 0))))

    @property
    def all_labelled(self) -> bool:
        return all(s.label is not None for s in self.summands)

    def to_json(self) -> dict:
        items = []
        for lab, rep, mult in self.classes():
            entry = {"multiplicity": mult,
                     "terms": {str(d): [f"P({v})" for v in vs] for d, vs in rep.terms.items()}}
            if lab is not None:
                entry["string"] = lab[0]
                entry["first_degree"] = lab[1]
            items.append(entry)
        return {"summands": items, "count": len(self.summands)}

    def recompose_identity(self) -> bool:
        """Σ ι_k π_k = id and π_j ι_k = δ_jk on the minimal model."""
        M = self.minimal
        if M.is_zero:
            return not self.summands
        total = ChainMap.zero(M, M)
        for s in self.summands:
            total = total + (s.incl @ s.proj)
        if not total.equals(ChainMap.identity(M)):
            return False
        for j, a in enumerate(self.summands):
            for k, b in enumerate(self.summands):
                prod = a.proj @ b.incl
                want = ChainMap.identity(a.complex) if j == k else ChainMap.zero(b.complex, a.complex)
                if not prod.equals(want):
                    return False
        return True


def _poly_chain(u: list, x: ChainMap) -> ChainMap:
    C = x.source
    out = ChainMap.zero(C, C)
    one = ChainMap.identity(C)
    for c in reversed(u):
        out = (out @ x) + one.scale(c)
    return out


def _lift_idempotent(e: ChainMap) -> ChainMap:
    for _ in range(64):
        e2 = e @ e
        if e2.equals(e):
            return e
        e = e2.scale(3) - (e2 @ e).scale(2)
    raise DecompositionError("idempotent lifting did not converge")


def _split(C: ProjComplex, e: ChainMap):
    """Image of a chain idempotent: (Q, ι: Q -> C, π: C -> Q) with πι = 1."""
    field, pa = C.field, C.pa
    vi = C.algebra.vertex_index
    q_terms, inc, prj = {}, {}, {}
    for d, terms in C.terms.items():
        E = e.comp(d)
        T = top_part(pa, E, terms, terms)
        R, S, qv = [], [], []
        for v in sorted(set(terms), key=vi.get):
            idx = [j for j, w in enumerate(terms) if w == v]
            blk = T[np.ix_(idx, idx)]
            _, pc = rref(blk, field)
            _, pr = rref(blk.T.copy(), field)
            S.extend(idx[j] for j in pc)
            R.extend(idx[j] for j in pr)
            qv.extend([v] * len(pc))
        if not qv:
            continue
        q = tuple(qv)
        U = field.zeros((len(terms), len(q), pa.n))
        L = field.zeros((len(q), len(terms), pa.n))
        for j, (r, s) in enumerate(zip(R, S)):
            U[s, j, pa.trivial[terms[s]]] = 1
            L[j, r, pa.trivial[terms[r]]] = 1
        iota = compose(field, pa, E, U)
        M = compose(field, pa, L, iota)
        Minv = graded_inverse(field, pa, M, q)
        pi = compose(field, pa, Minv, compose(field, pa, L, E))
        q_terms[d], inc[d], prj[d] = q, iota, pi
    diffs = {}
    for d in q_terms:
        if d + 1 in q_terms and d in C.diffs:
            diffs[d] = compose(field, pa, prj[d + 1], compose(field, pa, C.diffs[d], inc[d]))
    Q = ProjComplex(C.algebra, field, q_terms, diffs)
    return Q, ChainMap(Q, C, inc), ChainMap(C, Q, prj)


def end_top_algebra(C: ProjComplex) -> tuple[TopAlgebra, list[ChainMap]]:
    basis = chain_map_basis(C, C)
    tops = [chain_top(z) for z in basis]
    return TopAlgebra(C.field, tops), basis


def _find_idempotent(C: ProjComplex, budget: int) -> ChainMap | None:
    B, basis = end_top_algebra(C)
    sp = B.find_split(budget)
    if sp is None:
        return None
    field = C.field
    x = ChainMap.zero(C, C)
    for c, i in zip(sp.coeffs, B.index):
        if c:
            x = x + basis[i].scale(field.scalar(c))
    return _lift_idempotent(_poly_chain(sp.poly, x))


def split_minimal(M: ProjComplex, budget: int = DEFAULT_BUDGET, depth: int = 32) -> list[tuple]:
    """Indecomposable summands of a minimal complex as (Q, ι, π) triples."""
    if M.is_zero:
        return []
    out = []
    stack = [(M, ChainMap.identity(M), ChainMap.identity(M), 0)]
    while stack:
        X, inc, prj, lvl = stack.pop()
        if lvl > depth:
            raise DecompositionError("decomposition recursion depth exceeded", out)
        try:
            e = _find_idempotent(X, budget)
        except BudgetExceeded as exc:
            raise DecompositionError(str(exc), out) from exc
        if e is None:
            out.append((X, inc, prj))
            continue
        one = ChainMap.identity(X)
        for idem in (e, one - e):
            Q, i2, p2 = _split(X, idem)
            stack.append((Q, inc @ i2, p2 @ prj, lvl + 1))
    return out


class _Memo:
    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict = {}

    def get(self, key):
        with self._lock:
            return self._data.get(key)

    def put(self, key, value):
        with self._lock:
            self._data[key] = value

    def clear(self):
        with self._lock:
            self._data.clear()


DECOMPOSITION_MEMO = _Memo()


def decompose(C: ProjComplex, budget: int = DEFAULT_BUDGET, depth: int = 32,
              identify: bool = True) -> DecompositionReport:
    """Krull-Schmidt decomposition in the homotopy category."""
    key = (dumps(C), budget, identify)
    hit = DECOMPOSITION_MEMO.get(key)
    if hit is not None:
        return hit
    mm = minimize(C)
    pieces = split_minimal(mm.complex, budget, depth)
    summands = []
    for Q, inc, prj in pieces:
        summands.append(Summand(Q, inc, prj, identify_string(Q) if identify else None))
    summands.sort(key=lambda s: (s.label is None, s.label or ("", 0), repr(s.complex)))
    rep = DecompositionReport(C, mm.complex, summands)
    DECOMPOSITION_MEMO.put(key, rep)
    return rep


def is_indecomposable(C: ProjComplex, budget: int = DEFAULT_BUDGET) -> bool:
    M = minimize(C, with_maps=False)
    if M.is_zero:
        return False
    B, _ = end_top_algebra(M)
    return B.find_split(budget) is None


# -- isomorphism ---------------------------------------------------------------

def iso_indecomposable(X: ProjComplex, Y: ProjComplex) -> ChainMap | None:
    """An isomorphism between minimal indecomposables, or None."""
    if X.term_profile() != Y.term_profile():
        return None
    field = X.field
    fs = chain_map_basis(X, Y)
    if not fs:
        return None
    for f in fs:
        if is_invertible(chain_top(f), field):
            return f
    gs = chain_map_basis(Y, X)
    for f in fs:
        for g in gs:
            if is_invertible(chain_top(g @ f), field):
                return f
    return None


_STRING_INDEX: dict = {}
_STRING_LOCK = threading.Lock()


def _profile_signature(C: ProjComplex) -> tuple:
    tp = C.term_profile()
    lo = min(tp)
    return tuple((d - lo, vs) for d, vs in tp.items()), lo


def _string_index(alg: GentlePresentation, letters: int) -> dict:
    from .strings import enumerate_homotopy_strings
    with _STRING_LOCK:
        done, index = _STRING_INDEX.get(alg, (-1, {}))
        if done >= letters:
            return index
    index = {}
    for h in enumerate_homotopy_strings(alg, letters):
        C = h.realize(Field(2))
        sig, lo = _profile_signature(C)
        index.setdefault(sig, []).append((h, lo))
    with _STRING_LOCK:
        _STRING_INDEX[alg] = (letters, index)
    return index


def identify_string(X: ProjComplex) -> tuple | None:
    """(canonical string, degree of first vertex) of an indecomposable minimal complex."""
    if X.is_zero:
        return None
    n = X.num_terms() - 1
    index = _string_index(X.algebra, max(n, 0))
    sig, lo = _profile_signature(X)
    for h, hlo in index.get(sig, ()):
        if h.num_letters != n:
            continue
        cand = h.shifted(-(lo - hlo)).canonical()
        S = cand.realize(X.field)
        if iso_indecomposable(X, S) is not None:
            return (str(cand), cand.shift)
    return None


@dataclass
class IsoResult:
    isomorphic: bool
    witness: ChainMap | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


def is_isomorphic(A: ProjComplex, B: ProjComplex, witness: bool = False,
                  budget: int = DEFAULT_BUDGET) -> IsoResult:
    _check_same(A, B)
    ma, mb = minimize(A), minimize(B)
    if ma.complex.term_profile() != mb.complex.term_profile():
        return IsoResult(False, None, "minimal term profiles differ")
    ra, rb = decompose(A, budget), decompose(B, budget)
    if len(ra.summands) != len(rb.summands):
        return IsoResult(False, None, "different number of summands")
    used = [False] * len(rb.summands)
    pairs = []
    for sa in ra.summands:
        for j, sb in enumerate(rb.summands):
            if used[j]:
                continue
            if sa.label is not None and sb.label is not None:
                match = sa.label == sb.label
                phi = iso_indecomposable(sa.complex, sb.complex) if (match and witness) else None
            else:
                phi = iso_indecomposable(sa.complex, sb.complex)
                match = phi is not None
            if match:
                used[j] = True
                pairs.append((sa, sb, phi))
                break
        else:
            return IsoResult(False, None, "summands do not match")
    if not witness:
        return IsoResult(True)
    # ra/rb minimal models are those of A, B (minimize is deterministic)
    Ma, Mb = ra.minimal, rb.minimal
    phi_min = ChainMap.zero(Ma, Mb)
    for sa, sb, phi in pairs:
        phi_min = phi_min + (sb.incl @ (phi @ sa.proj))
    w = mb.from_min @ (phi_min @ ma.to_min)
    return IsoResult(True, w)


def is_homotopy_equivalence(f: ChainMap) -> bool:
    """True if the cone of f is contractible."""
    from .complexes import cone
    return is_contractible(cone(f))


def nilpotency_index(C: ProjComplex, maps: Sequence[ChainMap], cap: int | None = None) -> int | None:
    """Smallest k with every k-fold product of ``maps`` zero, or None beyond cap."""
    cap = cap if cap is not None else C.num_terms() * (C.pa.max_path_length + 1) + 1
    field = C.field
    cur = [m for m in maps if not m.is_zero()]
    k = 1
    while cur:
        if k >= cap:
            return None
        nxt = []
        for a in cur:
            for b in maps:
                p = a @ b
                if not p.is_zero():
                    nxt.append(p)
        # keep a spanning set only
        if nxt:
            V = _Vars(C.pa, C, C)
            rows = np.stack([np.concatenate([V.gather(i, p.comp(i)) for i in sorted(V.pos, key=V.off.get)])
                             for p in nxt])
            keep = independent_rows(rows, field)
            nxt = [nxt[i] for i in keep]
        cur = nxt
        k += 1
    return k


def null_homotopic_endomorphisms(C: ProjComplex) -> list[ChainMap]:
    """Spanning set of the null-homotopic chain endomorphisms d h + h d."""
    pa, field = C.pa, C.field
    V = _Vars(pa, C, C)
    if V.n == 0:
        return []
    Hm = _homotopy_images(C, C, V)
    if Hm.shape[0] == 0:
        return []
    keep = independent_rows(Hm, field)
    return [ChainMap(C, C, V.scatter(field, pa, Hm[i])) for i in keep]
