"""Finite-dimensional representations of a bound quiver.

A module is a vector space per vertex and a matrix per arrow, ``maps[a]`` of
shape ``(dim target, dim source)``.  Homomorphisms are tuples of matrices, one
per vertex, stored as a single block-diagonal matrix on the total space.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Mapping, Sequence

import numpy as np

from .algebra import GentlePresentation
from .endo import DEFAULT_BUDGET, TopAlgebra, poly_eval_matrix
from .exactla import Field, inverse, is_invertible, nullspace, rank, row_space_basis, rref, solve_affine


class ModuleError(ValueError):
    pass


class Module:
    def __init__(self, algebra: GentlePresentation, field: Field, dims: Mapping, maps: Mapping):
        self.algebra = algebra
        self.field = field
        self.dims = {v: int(dims.get(v, 0)) for v in algebra.vertices}
        self.maps = {}
        for a in algebra.quiver.arrows:
            shape = (self.dims[a.target], self.dims[a.source])
            m = maps.get(a.id)
            m = field.zeros(shape) if m is None else field.reduce(np.asarray(m, dtype=field.dtype).reshape(shape))
            self.maps[a.id] = m

    def __repr__(self) -> str:
        return f"Module[{self.algebra.name} {self.field}; dim {self.dimvec().tolist()}]"

    def dimvec(self) -> np.ndarray:
        return np.array([self.dims[v] for v in self.algebra.vertices], dtype=np.int64)

    @property
    def total_dim(self) -> int:
        return int(sum(self.dims.values()))

    def offsets(self) -> dict:
        out, o = {}, 0
        for v in self.algebra.vertices:
            out[v] = o
            o += self.dims[v]
        return out

    def satisfies_relations(self) -> bool:
        f = self.field
        for a, b in self.algebra.relations:
            if not f.is_zero(f.matmul(self.maps[b], self.maps[a])):
                return False
        return True

    def action(self, a: str) -> np.ndarray:
        """Arrow action as an endomorphism of the total space."""
        f, off = self.field, self.offsets()
        arr = self.algebra.quiver.arrow[a]
        M = f.zeros((self.total_dim, self.total_dim))
        M[off[arr.target]:off[arr.target] + self.dims[arr.target],
          off[arr.source]:off[arr.source] + self.dims[arr.source]] = self.maps[a]
        return M

    def same_as(self, other: "Module") -> bool:
        return self.dims == other.dims and all(np.array_equal(self.maps[a], other.maps[a]) for a in self.maps)

    def key(self) -> tuple:
        return (tuple(self.dimvec()), tuple((a, tuple(m.reshape(-1).tolist())) for a, m in sorted(self.maps.items())))


def direct_sum_modules(*ms: Module) -> Module:
    alg, f = ms[0].algebra, ms[0].field
    dims = {v: sum(m.dims[v] for m in ms) for v in alg.vertices}
    maps = {}
    for a in alg.quiver.arrows:
        M = f.zeros((dims[a.target], dims[a.source]))
        r = c = 0
        for m in ms:
            t, s = m.dims[a.target], m.dims[a.source]
            M[r:r + t, c:c + s] = m.maps[a.id]
            r, c = r + t, c + s
        maps[a.id] = M
    return Module(alg, f, dims, maps)


def zero_module(alg: GentlePresentation, field: Field) -> Module:
    return Module(alg, field, {}, {})


# -- homomorphisms ------------------------------------------------------------

def hom_basis(M: Module, N: Module) -> list[np.ndarray]:
    """Basis of Hom(M, N) as block matrices (total N) x (total M)."""
    f, alg = M.field, M.algebra
    verts = alg.vertices
    var_off, o = {}, 0
    for v in verts:
        var_off[v] = o
        o += N.dims[v] * M.dims[v]
    nvar = o
    rows = []
    for a in alg.quiver.arrows:
        s, t = a.source, a.target
        ns, nt, ms_, mt = N.dims[s], N.dims[t], M.dims[s], M.dims[t]
        if nt * ms_ == 0:
            continue
        blk = f.zeros((nt * ms_, nvar))
        if ns * ms_:
            # N_a φ_s
            blk[:, var_off[s]:var_off[s] + ns * ms_] += np.kron(N.maps[a.id], f.eye(ms_))
        if nt * mt:
            # - φ_t M_a
            blk[:, var_off[t]:var_off[t] + nt * mt] -= np.kron(f.eye(nt), M.maps[a.id].T)
        rows.append(f.reduce(blk))
    K = nullspace(np.vstack(rows), f) if rows else f.eye(nvar)
    out = []
    moff, noff = M.offsets(), N.offsets()
    for k in K:
        H = f.zeros((N.total_dim, M.total_dim))
        for v in verts:
            if N.dims[v] * M.dims[v]:
                blk = k[var_off[v]:var_off[v] + N.dims[v] * M.dims[v]].reshape(N.dims[v], M.dims[v])
                H[noff[v]:noff[v] + N.dims[v], moff[v]:moff[v] + M.dims[v]] = blk
        out.append(H)
    return out


def hom_dim(M: Module, N: Module) -> int:
    return len(hom_basis(M, N))


def is_homomorphism(M: Module, N: Module, H: np.ndarray) -> bool:
    f = M.field
    for a in M.algebra.quiver.arrows:
        if not f.is_zero(f.reduce(f.matmul(N.action(a.id), H) - f.matmul(H, M.action(a.id)))):
            return False
    return True


def end_algebra(M: Module) -> TopAlgebra:
    return TopAlgebra(M.field, hom_basis(M, M))


def is_indecomposable(M: Module, budget: int = DEFAULT_BUDGET) -> bool:
    if M.total_dim == 0:
        return False
    return end_algebra(M).find_split(budget) is None


def _split_by_idempotent(M: Module, E: np.ndarray) -> tuple[Module, np.ndarray, np.ndarray]:
    """Image of an idempotent: summand Q with inclusion ι and projection π (πι = 1)."""
    f, off = M.field, M.offsets()
    cols = []
    dims = {}
    for v in M.algebra.vertices:
        d = M.dims[v]
        blk = E[off[v]:off[v] + d, off[v]:off[v] + d]
        _, pivc = rref(blk, f) if d else (None, [])
        cols.extend(off[v] + c for c in pivc)
        dims[v] = len(pivc)
    U = E[:, cols]
    # U is block diagonal by vertex, so independent rows pair up with its columns
    _, prow = rref(U.T.copy(), f)
    L = U[prow]
    Linv = inverse(L, f)
    P = f.zeros((len(cols), M.total_dim))
    P[:, prow] = Linv
    P = f.matmul(P, E)
    Q_maps = {a: f.matmul(f.matmul(P, M.action(a)), U) for a in M.maps}
    Q = _from_total(M.algebra, f, dims, Q_maps)
    return Q, U, P


def _from_total(alg, f, dims, total_maps) -> Module:
    off, o = {}, 0
    for v in alg.vertices:
        off[v] = o
        o += dims[v]
    maps = {}
    for a in alg.quiver.arrows:
        T = total_maps[a.id]
        maps[a.id] = T[off[a.target]:off[a.target] + dims[a.target], off[a.source]:off[a.source] + dims[a.source]]
    return Module(alg, f, dims, maps)


def decompose_module(M: Module, budget: int = DEFAULT_BUDGET, depth: int = 32) -> list[Module]:
    """Indecomposable summands (Krull-Schmidt)."""
    if M.total_dim == 0:
        return []
    if depth <= 0:
        raise ModuleError("decomposition recursion depth exceeded")
    E = end_algebra(M)
    sp = E.find_split(budget)
    if sp is None:
        return [M]
    e = poly_eval_matrix(M.field, sp.poly, E.element(sp.coeffs))
    f = M.field
    one_minus = f.reduce(f.eye(M.total_dim) - e)
    out = []
    for idem in (e, one_minus):
        Q, _, _ = _split_by_idempotent(M, idem)
        out.extend(decompose_module(Q, budget, depth - 1))
    return out


def iso_witness_indecomposable(M: Module, N: Module) -> np.ndarray | None:
    """An isomorphism M -> N between indecomposables, or None."""
    if not np.array_equal(M.dimvec(), N.dimvec()):
        return None
    f = M.field
    fs, gs = hom_basis(M, N), hom_basis(N, M)
    for F in fs:
        if is_invertible(F, f):
            return F
    for F in fs:
        for G in gs:
            if is_invertible(f.matmul(G, F), f):
                return F
    return None


def is_isomorphic_modules(M: Module, N: Module, budget: int = DEFAULT_BUDGET) -> bool:
    if not np.array_equal(M.dimvec(), N.dimvec()):
        return False
    a, b = decompose_module(M, budget), decompose_module(N, budget)
    if len(a) != len(b):
        return False
    used = [False] * len(b)
    for x in a:
        for j, y in enumerate(b):
            if not used[j] and iso_witness_indecomposable(x, y) is not None:
                used[j] = True
                break
        else:
            return False
    return True


def dedup_modules(ms: Sequence[Module]) -> list[Module]:
    out: list[Module] = []
    for m in ms:
        if not any(iso_witness_indecomposable(m, x) is not None for x in out):
            out.append(m)
    return out


# -- brute force --------------------------------------------------------------

def iter_representations(alg: GentlePresentation, field: Field, dims: Mapping) -> Iterator[Module]:
    """Every representation with the given dimensions satisfying the relations."""
    arrows = alg.quiver.arrows
    shapes = [(dims.get(a.target, 0), dims.get(a.source, 0)) for a in arrows]
    sizes = [r * c for r, c in shapes]
    total = sum(sizes)
    for vals in itertools.product(range(field.p), repeat=total):
        maps, o = {}, 0
        for a, (r, c), s in zip(arrows, shapes, sizes):
            maps[a.id] = np.array(vals[o:o + s], dtype=np.int64).reshape(r, c)
            o += s
        M = Module(alg, field, dims, maps)
        if M.satisfies_relations():
            yield M


def count_representations(alg: GentlePresentation, field: Field, dims: Mapping) -> int:
    return field.p ** sum(dims.get(a.target, 0) * dims.get(a.source, 0) for a in alg.quiver.arrows)


def brute_indecomposables(alg: GentlePresentation, field: Field, dimvec: Sequence[int],
                          budget: int = DEFAULT_BUDGET) -> list[Module]:
    """Isomorphism classes of indecomposables with a dimension vector, by exhaustion."""
    dims = dict(zip(alg.vertices, (int(x) for x in dimvec)))
    if field.p is None:
        raise ModuleError("exhaustive enumeration needs a finite field")
    if count_representations(alg, field, dims) > budget:
        raise ModuleError("representation enumeration exceeds budget")
    found: list[Module] = []
    for M in iter_representations(alg, field, dims):
        if not is_indecomposable(M):
            continue
        if not any(iso_witness_indecomposable(M, x) is not None for x in found):
            found.append(M)
    return found


def brute_modules(alg: GentlePresentation, field: Field, dimvec: Sequence[int]) -> list[Module]:
    """Isomorphism classes of all modules with a dimension vector, by exhaustion."""
    dims = dict(zip(alg.vertices, (int(x) for x in dimvec)))
    found: list[Module] = []
    for M in iter_representations(alg, field, dims):
        if not any(is_isomorphic_modules(M, x) for x in found):
            found.append(M)
    return found


def iter_subspaces(field: Field, d: int) -> Iterator[np.ndarray]:
    """All subspaces of F_p^d, each as a basis in reduced row echelon form."""
    for k in range(d + 1):
        for piv in itertools.combinations(range(d), k):
            free = [(i, j) for i in range(k) for j in range(piv[i] + 1, d) if j not in piv]
            for vals in itertools.product(range(field.p), repeat=len(free)):
                B = np.zeros((k, d), dtype=np.int64)
                for i, j in enumerate(piv):
                    B[i, j] = 1
                for (i, j), x in zip(free, vals):
                    B[i, j] = x
                yield B


def submodule_dimvecs(M: Module, budget: int = DEFAULT_BUDGET) -> set[tuple]:
    """Dimension vectors of all submodules, by exhaustive graded subspace scan."""
    f = M.field
    if f.p is None:
        raise ModuleError("subspace enumeration needs a finite field")
    verts = M.algebra.vertices
    spaces = {v: list(iter_subspaces(f, M.dims[v])) for v in verts}
    n = 1
    for v in verts:
        n *= len(spaces[v])
    if n > budget:
        raise ModuleError("subspace enumeration exceeds budget")
    out = set()
    for choice in itertools.product(*(spaces[v] for v in verts)):
        U = dict(zip(verts, choice))
        ok = True
        for a in M.algebra.quiver.arrows:
            Us, Ut = U[a.source], U[a.target]
            if Us.shape[0] == 0:
                continue
            img = f.matmul(M.maps[a.id], Us.T).T
            if rank(np.vstack([Ut, img]), f) != Ut.shape[0]:
                ok = False
                break
        if ok:
            out.add(tuple(U[v].shape[0] for v in verts))
    return out


def image_dimvec(M: Module, N: Module, H: np.ndarray) -> np.ndarray:
    f, moff, noff = M.field, M.offsets(), N.offsets()
    out = []
    for v in M.algebra.vertices:
        blk = H[noff[v]:noff[v] + N.dims[v], moff[v]:moff[v] + M.dims[v]]
        out.append(rank(blk, f) if blk.size else 0)
    return np.array(out, dtype=np.int64)


def kernel_dimvec(M: Module, N: Module, H: np.ndarray) -> np.ndarray:
    return M.dimvec() - image_dimvec(M, N, H)


def iter_homs(M: Module, N: Module) -> Iterator[np.ndarray]:
    f = M.field
    basis = hom_basis(M, N)
    for c in itertools.product(range(f.p), repeat=len(basis)):
        H = f.zeros((N.total_dim, M.total_dim))
        for x, b in zip(c, basis):
            if x:
                H = H + x * b
        yield f.reduce(H)


# -- projective resolutions ----------------------------------------------------------

def projective_module(alg: GentlePresentation, field: Field, v) -> Module:
    """P(v) as a representation: basis the paths starting at v, arrows extend paths."""
    pa = alg.compiled
    basis = pa.proj_basis[v]
    by_vertex = {w: [k for k in basis if pa.tgt[k] == alg.vertex_index[w]] for w in alg.vertices}
    pos = {w: {k: i for i, k in enumerate(ks)} for w, ks in by_vertex.items()}
    maps = {}
    for a in alg.quiver.arrows:
        m = field.zeros((len(by_vertex[a.target]), len(by_vertex[a.source])))
        ak = pa.index[alg.make_path((a.id,))]
        for i, k in enumerate(by_vertex[a.source]):
            r = pa.then_table[k, ak]
            if r >= 0:
                m[pos[a.target][r], i] = 1
        maps[a.id] = m
    return Module(alg, field, {w: len(ks) for w, ks in by_vertex.items()}, maps)


def _path_action(M: Module, arrows: Sequence[str]) -> np.ndarray:
    f = M.field
    out = f.eye(M.total_dim)
    for a in arrows:
        out = f.matmul(M.action(a), out)
    return out


def syzygy(M: Module) -> Module:
    """Kernel of the projective cover of M."""
    f, alg, pa = M.field, M.algebra, M.algebra.compiled
    off = M.offsets()
    n = M.total_dim
    acts = [M.action(a.id) for a in alg.quiver.arrows]
    rad = np.hstack(acts) if acts else f.zeros((n, 0))
    gens = []                       # (vertex, vector) generators of the top
    for v in alg.vertices:
        d = M.dims[v]
        if not d:
            continue
        R = rad[off[v]:off[v] + d, :].T
        cur = row_space_basis(R, f) if R.size else f.zeros((0, d))
        for i in range(d):
            e = f.zeros((1, d))
            e[0, i] = 1
            cand = np.vstack([cur, e])
            if rank(cand, f) > cur.shape[0]:
                cur = cand
                g = f.zeros(n)
                g[off[v] + i] = 1
                gens.append((v, g))
    Ps = [projective_module(alg, f, v) for v, _ in gens]
    P = direct_sum_modules(*Ps) if Ps else zero_module(alg, f)
    # cover: the basis path p of the i-th summand goes to p acting on g_i
    cols = {w: [] for w in alg.vertices}
    for (v, g), Pi in zip(gens, Ps):
        for w in alg.vertices:
            for k in pa.proj_basis[v]:
                if pa.tgt[k] == alg.vertex_index[w]:
                    cols[w].append(f.matmul(_path_action(M, pa.paths[k].arrows), g.reshape(-1, 1)).reshape(-1))
    poff = P.offsets()
    pi = f.zeros((n, P.total_dim))
    for w in alg.vertices:
        for j, c in enumerate(cols[w]):
            pi[:, poff[w] + j] = c
    # kernel, vertex by vertex, then the induced arrow action
    kb = {}
    for w in alg.vertices:
        blk = pi[off[w]:off[w] + M.dims[w], poff[w]:poff[w] + P.dims[w]]
        kb[w] = nullspace(blk, f) if P.dims[w] else f.zeros((0, 0))
        if P.dims[w] and not M.dims[w]:
            kb[w] = f.eye(P.dims[w])
    maps = {}
    for a in alg.quiver.arrows:
        s, t = a.source, a.target
        m = f.zeros((kb[t].shape[0], kb[s].shape[0]))
        if m.size:
            img = f.matmul(P.maps[a.id], kb[s].T)          # in P_t coordinates
            sol = [solve_affine(kb[t].T, img[:, j], f)[0] for j in range(img.shape[1])]
            m = f.reduce(np.stack(sol, axis=1))
        maps[a.id] = m
    return Module(alg, f, {w: kb[w].shape[0] for w in alg.vertices}, maps)


def projective_dimension(M: Module, limit: int = 32) -> int | None:
    """Length of a minimal projective resolution, or None beyond ``limit``."""
    cur = M
    for d in range(limit + 1):
        cur = syzygy(cur)
        if cur.total_dim == 0:
            return d
    return None


def simple_module(alg: GentlePresentation, field: Field, v) -> Module:
    return Module(alg, field, {v: 1}, {})


def global_dimension(alg: GentlePresentation, field: Field, limit: int = 32) -> int | None:
    """max projective dimension of the simples; None if some resolution exceeds ``limit``."""
    pds = [projective_dimension(simple_module(alg, field, v), limit) for v in alg.vertices]
    return None if any(p is None for p in pds) else max(pds)
