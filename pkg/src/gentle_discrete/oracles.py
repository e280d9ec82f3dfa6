"""Brute-force oracles over small finite fields.

These deliberately avoid the string classification and the idempotent
splitting used by the main engine: complexes are enumerated entry by entry,
indecomposability is the "every endomorphism is invertible or nilpotent" test
over all endomorphisms, and isomorphism is a search for a chain map with
invertible top.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .algebra import GentlePresentation
from .complexes import ProjComplex, cohomology_profile, compose, evaluate_map, hom_mask, profile_key
from .exactla import Field, is_invertible, nullspace, rank
from .homcat import chain_map_basis, chain_top
from .modules import Module, hom_basis, iter_representations

DEFAULT_BUDGET = 2 ** 20


class OracleBudget(RuntimeError):
    pass


def _radical_positions(alg: GentlePresentation, targets: tuple, sources: tuple) -> np.ndarray:
    pa = alg.compiled
    mask = hom_mask(pa, targets, sources) & (pa.length.reshape(1, 1, -1) > 0)
    return np.argwhere(mask)


def _span(field: Field, basis: Sequence[np.ndarray], shape) -> Iterator[np.ndarray]:
    if not basis:
        yield field.zeros(shape)
        return
    for c in itertools.product(range(field.p), repeat=len(basis)):
        out = field.zeros(shape)
        for x, b in zip(c, basis):
            if x:
                out = out + x * b
        yield field.reduce(out)


def iter_minimal_complexes(alg: GentlePresentation, field: Field, terms: Mapping[int, tuple],
                           budget: int = DEFAULT_BUDGET, prune=None) -> Iterator[ProjComplex]:
    """Every complex with these terms and radical differential entries.

    ``prune(d, E, state)`` sees each new differential ``E = d^d`` as a matrix
    on the underlying vector spaces, together with the state returned for
    the previous degree (None at the start); returning None cuts the branch.
    """
    if not field.is_finite:
        raise OracleBudget("exhaustive enumeration needs a finite field")
    pa = alg.compiled
    degs = sorted(d for d, vs in terms.items() if len(vs))
    terms = {d: tuple(terms[d]) for d in degs}
    steps = [d for d in degs if d + 1 in terms]
    count = [0]

    def rec(k: int, diffs: dict, ev: dict, state):
        if k == len(steps):
            C = ProjComplex(alg, field, terms, diffs)
            C.__dict__["evaluated"] = ev    # already known, skip re-evaluation
            yield C
            return
        d = steps[k]
        T, S = terms[d + 1], terms[d]
        pos = _radical_positions(alg, T, S)
        units = []
        for t, s, p in pos:
            u = field.zeros((len(T), len(S), pa.n))
            u[t, s, p] = 1
            units.append(u)
        prev = diffs.get(d - 1)
        if prev is not None and units:
            # linear constraint d^d ∘ d^{d-1} = 0 on the new differential
            imgs = np.stack([compose(field, pa, u, prev).reshape(-1) for u in units], axis=1)
            K = nullspace(imgs, field)
            basis = [field.reduce(np.tensordot(k, np.stack(units), axes=1)) for k in K]
        else:
            basis = units
        count[0] += field.p ** len(basis)
        if count[0] > budget:
            raise OracleBudget("complex enumeration exceeds budget")
        shape = (len(T), len(S), pa.n)
        ebasis = [evaluate_map(field, pa, T, S, b) for b in basis]
        eshape = (sum(pa.proj_dim(w) for w in T), sum(pa.proj_dim(v) for v in S))
        for D, E in zip(_span(field, basis, shape), _span(field, ebasis, eshape)):
            nstate = None
            if prune is not None:
                nstate = prune(d, E, state)
                if nstate is None:
                    continue
            nev = dict(ev)
            nev[d] = E
            nd = dict(diffs)
            nd[d] = D
            yield from rec(k + 1, nd, nev, nstate)

    yield from rec(0, {}, {}, None)


def is_local_bruteforce(C: ProjComplex, budget: int = DEFAULT_BUDGET) -> bool:
    """Every chain endomorphism has invertible or nilpotent top."""
    field = C.field
    if C.is_zero:
        return False
    tops = [chain_top(z) for z in chain_map_basis(C, C)]
    if field.p ** len(tops) > budget:
        raise OracleBudget("endomorphism enumeration exceeds budget")
    n = tops[0].shape[0]
    for T in _span(field, tops, (n, n)):
        if is_invertible(T, field):
            continue
        P = T
        for _ in range(n):
            P = field.matmul(P, T)
        if not field.is_zero(P):
            return False
    return True


def iso_bruteforce(X: ProjComplex, Y: ProjComplex, budget: int = DEFAULT_BUDGET) -> bool:
    """Search all chain maps between minimal complexes for one with invertible top."""
    if X.term_profile() != Y.term_profile():
        return False
    field = X.field
    tops = [chain_top(z) for z in chain_map_basis(X, Y)]
    if not tops:
        return False
    if field.p ** len(tops) > budget:
        raise OracleBudget("isomorphism search exceeds budget")
    n = tops[0].shape
    return any(is_invertible(T, field) for T in _span(field, tops, n))


def is_connected(C: ProjComplex) -> bool:
    """Terms linked by nonzero differential entries form one component.

    A disconnected complex is visibly a direct sum.
    """
    nodes = [(d, t) for d in C.degrees for t in range(len(C.term(d)))]
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d, D in C.diffs.items():
        for t, s in zip(*np.nonzero((D != 0).any(axis=2))):
            parent[find((d + 1, int(t)))] = find((d, int(s)))
    return len({find(x) for x in nodes}) == 1


def iter_term_profiles(vertices: Sequence, window: tuple[int, int], max_per_degree: int) -> Iterator[dict]:
    per = [()]
    for k in range(1, max_per_degree + 1):
        per.extend(itertools.combinations_with_replacement(vertices, k))
    degs = list(range(window[0], window[1] + 1))
    for choice in itertools.product(per, repeat=len(degs)):
        tp = {d: c for d, c in zip(degs, choice) if c}
        if tp:
            yield tp


def _support_is_interval(tp: Mapping[int, tuple]) -> bool:
    ds = sorted(tp)
    return ds[-1] - ds[0] + 1 == len(ds)


def brute_indecomposable_complexes(alg: GentlePresentation, field: Field,
                                   profiles: Iterable[Mapping[int, tuple]],
                                   budget: int = DEFAULT_BUDGET) -> list[ProjComplex]:
    """Pairwise non-isomorphic indecomposable minimal complexes with the given terms."""
    out: list[ProjComplex] = []
    for tp in profiles:
        if not _support_is_interval(tp):
            continue   # a gap in the support splits the complex
        found: list[ProjComplex] = []
        for C in iter_minimal_complexes(alg, field, tp, budget):
            if not is_connected(C) or not is_local_bruteforce(C, budget):
                continue
            if any(iso_bruteforce(C, D, budget) for D in found):
                continue
            found.append(C)
        out.extend(found)
    return out


def brute_window_census(alg: GentlePresentation, field: Field, window: tuple[int, int],
                        max_per_degree: int, budget: int = DEFAULT_BUDGET,
                        profile_filter=None) -> list[ProjComplex]:
    """All indecomposable complexes with terms in a degree window, at most k per degree."""
    profiles = iter_term_profiles(alg.vertices, window, max_per_degree)
    if profile_filter is not None:
        profiles = (tp for tp in profiles if profile_filter(tp))
    return brute_indecomposable_complexes(alg, field, profiles, budget)


def brute_heart_census(alg: GentlePresentation, field: Field, term_window: tuple[int, int],
                       max_per_degree: int, h_window: tuple[int, int], max_mass: int,
                       budget: int = DEFAULT_BUDGET) -> dict[tuple, list[ProjComplex]]:
    """Indecomposables with terms in a window, grouped by cohomology profile.

    Only complexes whose cohomology lies in ``h_window`` with total mass at
    most ``max_mass`` are kept.  Term profiles are pre-filtered by dimension
    counts that exactness below the window forces, and branches are cut as
    soon as the cohomology fixed so far leaves the window or the mass.
    """
    pa = alg.compiled
    dv = {v: np.asarray(pa.proj_dimvec(v), dtype=np.int64) for v in alg.vertices}
    top = {v: np.eye(len(alg.vertices), dtype=np.int64)[alg.vertex_index[v]] for v in alg.vertices}
    lo_h, hi_h = h_window

    def admissible(tp) -> bool:
        if max(tp) > hi_h or not _support_is_interval(tp):
            return False
        ds = sorted(tp)
        dim = {d: sum(dv[v] for v in tp[d]) for d in ds}
        # below the window the complex is exact: the image of d^k has the
        # alternating dimension vector and sits in the radical of the next term
        im = np.zeros(len(alg.vertices), dtype=np.int64)
        for d in ds:
            if d >= lo_h:
                break
            im = dim[d] - im
            rad = dim[d + 1] - sum(top[v] for v in tp[d + 1]) if d + 1 in tp else 0 * im
            if (im < 0).any() or (im > rad).any():
                return False
        # the top term is never hit by a radical differential
        if len(tp[ds[-1]]) > max_mass:
            return False
        chi = sum((-1) ** (d % 2) * dim[d] for d in ds)
        return int(np.abs(chi).sum()) <= max_mass

    def run(tp):
        size = {d: sum(pa.proj_dim(v) for v in vs) for d, vs in tp.items()}
        blocks = {d: np.cumsum([0] + [pa.proj_dim(v) for v in vs]) for d, vs in tp.items()}

        def prune(d, E, state):
            # state = (mass of H^{<d}, previous differential); H^d is now fixed
            mass, P = state if state is not None else (0, None)
            if field.is_zero(E):
                return None             # the complex splits at this degree
            b = blocks[d]
            for t in range(len(b) - 1):
                # a term of degree d touched by neither differential splits off
                if not E[:, b[t]:b[t + 1]].any() and (P is None or not P[b[t]:b[t + 1], :].any()):
                    return None
            h = size[d] - rank(E, field) - (rank(P, field) if P is not None else 0)
            if h and not lo_h <= d <= hi_h:
                return None
            mass += h
            return (mass, E) if mass <= max_mass else None
        return prune

    out: dict[tuple, list[ProjComplex]] = {}
    for tp in iter_term_profiles(alg.vertices, term_window, max_per_degree):
        if not admissible(tp):
            continue
        found: list[ProjComplex] = []
        for C in iter_minimal_complexes(alg, field, tp, budget, run(tp)):
            if not is_connected(C):
                continue
            if C.hi - 1 in C.diffs and len(tp[C.hi]) and \
                    sum(pa.proj_dim(v) for v in tp[C.hi]) == rank(C.evaluated[C.hi - 1], field):
                continue
            prof = cohomology_profile(C)
            mass = sum(int(v.sum()) for v in prof.values())
            if not 0 < mass <= max_mass or any(not lo_h <= d <= hi_h for d in prof):
                continue
            if not is_local_bruteforce(C, budget):
                continue
            if any(iso_bruteforce(C, D, budget) for D in found):
                continue
            found.append(C)
        for C in found:
            out.setdefault(profile_key(cohomology_profile(C)), []).append(C)
    return out


# -- homotopy category on underlying spaces ---------------------------------------

def _space_actions(C: ProjComplex, d: int) -> dict[str, np.ndarray]:
    """Actions on the vector space of C^d = ⊕P(v): a path k goes to k then a.

    The vertex idempotents are included so that commuting with every action
    means being a module map.
    """
    alg, pa, field = C.algebra, C.pa, C.field
    pos, o = {}, 0
    for j, v in enumerate(C.term(d)):
        for k in pa.proj_basis[v]:
            pos[(j, int(k))] = o
            o += 1
    out = {}
    for a in alg.quiver.arrows:
        ak = pa.index[alg.make_path((a.id,))]
        M = field.zeros((o, o))
        for (j, k), i in pos.items():
            r = pa.then_table[k, ak]
            if r >= 0:
                M[pos[(j, int(r))], i] = 1
        out[a.id] = M
    for u in alg.vertices:
        E = field.zeros((o, o))
        for (j, k), i in pos.items():
            if pa.tgt[k] == alg.vertex_index[u]:
                E[i, i] = 1
        out[("e", u)] = E
    return out


def _space_dim(C: ProjComplex, d: int) -> int:
    return sum(C.pa.proj_dim(v) for v in C.term(d))


def _module_map_constraints(field: Field, SA: dict, SB: dict, m: int, n: int) -> np.ndarray:
    # X is m x n (B-space by A-space), row-major: B_a X - X A_a = 0
    rows = [field.reduce(np.kron(SB[a], field.eye(n)) - np.kron(field.eye(m), SA[a].T)) for a in SA]
    return np.vstack(rows) if rows else field.zeros((0, m * n))


def hom_dim_kb_linear(A: ProjComplex, B: ProjComplex) -> int:
    """dim Hom_K(A, B) from module maps between the underlying vector spaces.

    Chain maps are tuples of linear maps commuting with every arrow and with
    the evaluated differentials; null-homotopic maps are d h + h d for module
    maps h of degree -1.  Nothing of the path-graded representation is used
    beyond the evaluated differentials.
    """
    field = A.field
    degs = sorted(set(A.terms) | set(B.terms))
    dimA = {d: _space_dim(A, d) for d in range(degs[0] - 1, degs[-1] + 2)} if degs else {}
    dimB = {d: _space_dim(B, d) for d in dimA}
    evA = {d: evaluate_map(field, A.pa, A.term(d + 1), A.term(d), A.d(d)) for d in dimA}
    evB = {d: evaluate_map(field, B.pa, B.term(d + 1), B.term(d), B.d(d)) for d in dimA}

    def layout(shift_deg):
        off, o = {}, 0
        for d in degs:
            m, n = dimB.get(d + shift_deg, 0), dimA[d]
            if m * n:
                off[d] = (o, m, n)
                o += m * n
        return off, o

    def module_space(shift_deg):
        off, total = layout(shift_deg)
        blocks = []
        for d, (o, m, n) in off.items():
            K = _module_map_constraints(field, _space_actions(A, d), _space_actions(B, d + shift_deg), m, n)
            N = nullspace(K, field) if K.shape[0] else field.eye(m * n)
            for k in N:
                v = field.zeros(total)
                v[o:o + m * n] = k
                blocks.append(v)
        return off, total, (np.stack(blocks) if blocks else field.zeros((0, total)))

    off0, n0, M0 = module_space(0)
    if not len(M0):
        return 0

    def unpack(off, vec, d):
        if d not in off:
            return None
        o, m, n = off[d]
        return vec[o:o + m * n].reshape(m, n)

    def chain_defect(vec):
        # (d_B X_d - X_{d+1} d_A) for every d, flattened
        parts = []
        for d in degs:
            Xd, Xn = unpack(off0, vec, d), unpack(off0, vec, d + 1)
            out = field.zeros((dimB[d + 1], dimA[d]))
            if Xd is not None:
                out = out + field.matmul(evB[d], Xd)
            if Xn is not None:
                out = out - field.matmul(Xn, evA[d])
            parts.append(field.reduce(out).reshape(-1))
        return np.concatenate(parts)

    D = np.stack([chain_defect(v) for v in M0], axis=1)
    Z = nullspace(D, field)
    if not len(Z):
        return 0
    offh, _, Mh = module_space(-1)
    images = []
    for h in Mh:
        img = field.zeros(n0)
        for d, (o, m, n) in off0.items():
            out = field.zeros((m, n))
            hd, hn = unpack(offh, h, d), unpack(offh, h, d + 1)
            if hd is not None:
                out = out + field.matmul(evB[d - 1], hd)
            if hn is not None:
                out = out + field.matmul(hn, evA[d])
            img[o:o + m * n] = field.reduce(out).reshape(-1)
        images.append(img)
    null = rank(np.stack(images), field) if images else 0
    return len(Z) - null


# -- modules -----------------------------------------------------------------------

def module_dimvecs_upto(alg: GentlePresentation, bound: Sequence[int]) -> Iterator[tuple]:
    yield from itertools.product(*(range(b + 1) for b in bound))


def exact_sequence_middles(Hp: Module, Hpp: Module) -> set[tuple]:
    """Dimension vectors of every H admitting H' -f-> H -g-> H'' exact at H.

    All representations H are enumerated up to the vertexwise bound
    dim H_v <= dim H'_v + dim H''_v forced by rank-nullity.
    """
    alg, field = Hp.algebra, Hp.field
    bound = Hp.dimvec() + Hpp.dimvec()
    out = set()
    for dv in module_dimvecs_upto(alg, bound):
        dims = dict(zip(alg.vertices, dv))
        for H in iter_representations(alg, field, dims):
            if _has_exact_pair(Hp, H, Hpp):
                out.add(tuple(int(x) for x in dv))
                break
    return out


def _has_exact_pair(Hp: Module, H: Module, Hpp: Module) -> bool:
    field = H.field
    n = H.total_dim
    fb, gb = hom_basis(Hp, H), hom_basis(H, Hpp)
    fs = list(_span(field, fb, (n, Hp.total_dim)))
    gs = list(_span(field, gb, (Hpp.total_dim, n)))
    for F in fs:
        rf = rank(F, field) if F.size else 0
        for G in gs:
            if F.size and G.size and not field.is_zero(field.matmul(G, F)):
                continue
            rg = rank(G, field) if G.size else 0
            if rf + rg == n:
                return True
    return False
