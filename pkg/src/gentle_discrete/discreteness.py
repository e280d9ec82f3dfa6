"""Fiber enumerators, hom-bound scans and cone censuses.

Heart fibers collect the indecomposable complexes with a prescribed
cohomology dimension vector in every degree; co-heart fibers collect the
indecomposable minimal complexes with a prescribed multiset of projectives in
every degree.  Both are read off the homotopy-string classification, with a
band check guarding completeness.
"""

from __future__ import annotations

import itertools
import random
import threading
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

from .algebra import GentlePresentation
from .complexes import (ChainMap, ProjComplex, cohomology_profile, cone, normalize_profile,
                        profile_key, profile_mass, shift)
from .endo import DEFAULT_BUDGET
from .exactla import Field
from .homcat import (DecompositionReport, chain_dim_upper_bound, decompose, hom_dim_kb,
                     hom_space, is_isomorphic)
from .modules import Module, brute_indecomposables, iso_witness_indecomposable, submodule_dimvecs
from .strings import (HomotopyString, detect_bands, enumerate_homotopy_strings,
                      enumerate_string_modules, realize_string_module)


class Refusal(RuntimeError):
    """A structured refusal: the requested answer cannot be certified."""

    def __init__(self, reason: str, detail=None):
        super().__init__(reason)
        self.reason = reason
        self.detail = detail


# -- queries and profiles --------------------------------------------------------

@dataclass
class FiberQuery:
    algebra: GentlePresentation
    mode: str                       # "heart" or "coheart"
    profile: Mapping                # degree -> dimvec, or degree -> list of vertices
    field: Field = Field(2)
    letter_bound: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("heart", "coheart"):
            raise ValueError("mode must be 'heart' or 'coheart'")
        self.profile = {int(d): v for d, v in self.profile.items()}


def letter_bound(alg: GentlePresentation, profile: Mapping[int, Sequence[int]]) -> int:
    """Completeness bound for heart fibers: mass * (longest path + 1) + degree span.

    A string realizing the profile has at most ``mass`` local degree maxima,
    and its exact monotone stretches are limited by the path length and the
    width of the cohomology support.
    """
    key = profile_key(profile)
    if not key:
        return 0
    mass = profile_mass(key)
    span = key[-1][0] - key[0][0]
    return mass * (alg.compiled.max_path_length + 1) + span


class _Index:
    """Cached normalized-profile index of homotopy strings per (algebra, field)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict = {}

    def get(self, alg: GentlePresentation, field: Field, letters: int) -> dict:
        with self._lock:
            done, idx = self._data.get((alg, field), (-1, None))
            if done >= letters:
                return idx
        idx = {}
        for h in enumerate_homotopy_strings(alg, letters):
            C = h.realize(field)
            lo, sig = normalize_profile(profile_key(cohomology_profile(C)))
            idx.setdefault(sig, []).append((h, lo))
        with self._lock:
            self._data[(alg, field)] = (letters, idx)
        return idx


_PROFILE_INDEX = _Index()


@dataclass
class FiberMember:
    complex: ProjComplex
    string: HomotopyString | None

    @property
    def label(self) -> str:
        return f"{self.string}@{self.string.shift}" if self.string is not None else repr(self.complex)


@dataclass
class FiberResult:
    query: FiberQuery
    bound: int
    members: list
    method: str = "strings"

    def __len__(self) -> int:
        return len(self.members)

    def labels(self) -> list[str]:
        return [m.label for m in self.members]


def h_fiber(q: FiberQuery) -> FiberResult:
    """Indecomposables D with dimvec H^i(D) = v(i) for every i."""
    alg, field = q.algebra, q.field
    key = profile_key(q.profile)
    L = q.letter_bound if q.letter_bound is not None else letter_bound(alg, q.profile)
    if not key:
        return FiberResult(q, 0, [])
    bands = detect_bands(alg, max(L, 2))
    if bands:
        raise Refusal("band present; fiber finiteness not guaranteed",
                      [str(b) for b in bands[:5]])
    lo, sig = normalize_profile(key)
    members = []
    for h, hlo in _PROFILE_INDEX.get(alg, field, L).get(sig, ()):
        s = HomotopyString(alg, h.start, h.letters, h.shift + lo - hlo).canonical()
        C = s.realize(field)
        if profile_key(cohomology_profile(C)) != key:
            raise AssertionError(f"post-hoc profile check failed for {s}")
        members.append(FiberMember(C, s))
    members.sort(key=lambda m: (m.string.num_letters, m.string.key(), m.string.shift))
    return FiberResult(q, L, members)


def term_profile_of(profile: Mapping[int, Iterable], alg: GentlePresentation) -> tuple:
    vi = alg.vertex_index
    return tuple((int(d), tuple(sorted(vs, key=vi.get))) for d, vs in sorted(profile.items()) if len(vs))


def c_fiber(q: FiberQuery) -> FiberResult:
    """Indecomposable minimal complexes with the prescribed terms in every degree."""
    alg, field = q.algebra, q.field
    tp = term_profile_of(q.profile, alg)
    if not tp:
        return FiberResult(q, 0, [])
    nterms = sum(len(vs) for _, vs in tp)
    bands = detect_bands(alg, max(nterms, 2))
    if bands:
        if not field.is_finite:
            raise Refusal("band present; fiber finiteness not guaranteed",
                          [str(b) for b in bands[:5]])
        from .oracles import brute_indecomposable_complexes
        found = brute_indecomposable_complexes(alg, field, [dict(tp)])
        members = [FiberMember(C, None) for C in found]
        return FiberResult(q, nterms - 1, members, method="exhaustive")
    lo = tp[0][0]
    sig = tuple((d - lo, vs) for d, vs in tp)
    from .homcat import _string_index
    members = []
    for h, hlo in _string_index(alg, nterms - 1).get(sig, ()):
        if h.num_letters != nterms - 1:
            continue
        s = HomotopyString(alg, h.start, h.letters, h.shift + lo - hlo).canonical()
        C = s.realize(field)
        if term_profile_of(C.terms, alg) != tp:
            raise AssertionError(f"post-hoc term check failed for {s}")
        members.append(FiberMember(C, s))
    members.sort(key=lambda m: (m.string.key(), m.string.shift))
    return FiberResult(q, nterms - 1, members)


# -- hom bounds --------------------------------------------------------------------

@dataclass
class HomScanResult:
    max_dim: int
    witness: tuple | None           # (A, B) complexes attaining the maximum
    witness_strings: tuple | None   # their (string, first degree) labels
    pairs: int
    computed: int


def hom_bound_scan(alg: GentlePresentation, max_letters: int, field: Field = Field(2)) -> HomScanResult:
    """Maximum of dim Hom_K over all ordered pairs of strings and relative shifts.

    Pairs are visited by total letter count, so the witness is a shortest one.
    Pairs whose number of unknowns cannot beat the current maximum are skipped.
    """
    strings = enumerate_homotopy_strings(alg, max_letters)
    cs = [(h, h.realize(field)) for h in strings]
    order = sorted(itertools.product(range(len(cs)), repeat=2),
                   key=lambda ij: (strings[ij[0]].num_letters + strings[ij[1]].num_letters, ij))
    best, wit, wlab = 0, None, None
    pairs = computed = 0
    for i, j in order:
        ha, A = cs[i]
        hb, B = cs[j]
        for k in range(B.lo - A.hi, B.hi - A.lo + 1):
            Bk = shift(B, k)
            pairs += 1
            if chain_dim_upper_bound(A, Bk) <= best:
                continue
            computed += 1
            d = hom_dim_kb(A, Bk)
            if d > best:
                best, wit = d, (A, Bk)
                wlab = ((str(ha), ha.shift), (str(hb), hb.shift - k))
    return HomScanResult(best, wit, wlab, pairs, computed)


# -- cone census ---------------------------------------------------------------------

@dataclass
class CensusClass:
    report: DecompositionReport
    count: int
    nonzero_count: int
    example: tuple          # coefficient vector of one map in the Hom_K basis

    @property
    def labels(self) -> list[str]:
        return [s.label_text() for s in self.report.summands]


@dataclass
class CensusResult:
    classes: list
    hom_dim: int
    maps_checked: int
    exhaustive: bool
    mode: str = "chain"

    def nonzero_classes(self) -> list:
        return [c for c in self.classes if c.nonzero_count]


def _same_class(r1: DecompositionReport, r2: DecompositionReport) -> bool:
    if r1.all_labelled and r2.all_labelled:
        return r1.key() == r2.key()
    return bool(is_isomorphic(r1.source, r2.source))


def cone_census(A: ProjComplex, B: ProjComplex, field: Field | None = None,
                budget: int = DEFAULT_BUDGET, samples: int = 64, seed: int = 0,
                mode: str = "chain") -> CensusResult:
    """Isomorphism classes of cones of all maps A -> B.

    ``mode="homotopy"`` runs over all elements of Hom_K (cones only depend on
    the homotopy class); ``mode="chain"`` runs over every strict chain map.
    Over Q the census is sampled and flagged as such.
    """
    field = field or A.field
    if field != A.field:
        A, B = A.with_field(field), B.with_field(field)
    hs = hom_space(A, B)
    basis = hs.quotient_basis if mode == "homotopy" else hs.chain_basis
    d = len(basis)
    if field.is_finite:
        if field.p ** d > budget:
            raise Refusal("census budget exceeded", {"maps": field.p ** d, "budget": budget})
        coeff_iter = itertools.product(range(field.p), repeat=d)
        exhaustive = True
    else:
        rng = random.Random(seed)
        vecs = [tuple([0] * d)] + [tuple(field.random_scalar(rng) for _ in range(d)) for _ in range(samples)]
        coeff_iter = iter(vecs)
        exhaustive = False
    classes: list[CensusClass] = []
    n = 0
    for c in coeff_iter:
        n += 1
        f = ChainMap.zero(A, B)
        for x, b in zip(c, basis):
            if x:
                f = f + b.scale(field.scalar(x))
        rep = decompose(cone(f), budget)
        nz = any(c)
        if mode == "chain" and nz:
            from .homcat import is_null_homotopic
            nz = not is_null_homotopic(f)
        for cl in classes:
            if _same_class(cl.report, rep):
                cl.count += 1
                cl.nonzero_count += int(nz)
                break
        else:
            classes.append(CensusClass(rep, 1, int(nz), tuple(int(x) if field.is_finite else str(x) for x in c)))
    classes.sort(key=lambda cl: (cl.report.key() if cl.report.all_labelled else ((None,),), cl.example))
    return CensusResult(classes, hs.dim, n, exhaustive, mode)


# -- uniqueness --------------------------------------------------------------------

@dataclass
class UniquenessResult:
    ok: bool
    checked: int
    collision: tuple | None = None
    collisions: list = dc_field(default_factory=list)


def uniqueness_check(alg: GentlePresentation, max_letters: int, field: Field = Field(2)) -> UniquenessResult:
    """Are indecomposables (up to shift) determined by their cohomology profiles?

    Every colliding pair of strings is recorded; ``collision`` is the first.
    """
    seen: dict = {}
    collisions = []
    strings = enumerate_homotopy_strings(alg, max_letters)
    for h in strings:
        _, sig = normalize_profile(profile_key(cohomology_profile(h.realize(field))))
        if sig in seen:
            collisions.append((str(seen[sig]), str(h)))
        else:
            seen[sig] = h
    return UniquenessResult(not collisions, len(strings), collisions[0] if collisions else None, collisions)


# -- abelian side ------------------------------------------------------------------

@dataclass
class AbelianMember:
    module: Module
    walk: object | None

    @property
    def label(self) -> str:
        return str(self.walk) if self.walk is not None else "band " + repr(self.module)


def abelian_fiber(alg: GentlePresentation, c: Sequence[int], field: Field = Field(2),
                  budget: int = DEFAULT_BUDGET) -> list[AbelianMember]:
    """Indecomposable modules with dimension vector c."""
    en = enumerate_string_modules(alg, c)
    members = [AbelianMember(realize_string_module(alg, w, field), w) for w in en.walks]
    if en.band_present:
        if not field.is_finite:
            raise Refusal("band present; fiber finiteness not guaranteed",
                          [[l.path[0] + ("~" if l.inverse else "") for l in b] for b in en.bands])
        for M in brute_indecomposables(alg, field, c, budget):
            if not any(iso_witness_indecomposable(M, m.module) is not None for m in members):
                members.append(AbelianMember(M, None))
    return members


def sub_classes_bruteforce(M: Module, max_dim: int = 8) -> set[tuple]:
    if M.total_dim > max_dim:
        raise Refusal("module too large for subspace enumeration", {"dim": M.total_dim, "max": max_dim})
    return submodule_dimvecs(M)


def factor_classes(M: Module, max_dim: int = 8) -> set[tuple]:
    top = tuple(int(x) for x in M.dimvec())
    return {tuple(t - s for t, s in zip(top, sub)) for sub in sub_classes_bruteforce(M, max_dim)}


def middle_classes(Hp: Module, Hpp: Module, max_dim: int = 8) -> set[tuple]:
    """Predicted classes [im f] + [im g] of middles H in exact H' -> H -> H''."""
    return {tuple(a + b for a, b in zip(x, y))
            for x in factor_classes(Hp, max_dim) for y in sub_classes_bruteforce(Hpp, max_dim)}


def kronecker_family(field: Field, count: int) -> list[tuple]:
    """``count`` regular Kronecker modules R_λ with pairwise non-isomorphism proofs.

    Each proof is the pair of Hom dimensions between R_λ and R_μ, both zero.
    """
    from .modules import hom_dim
    from .zoo import kronecker_regular
    lams = list(range(count))
    if field.is_finite and count > field.p + 1:
        raise Refusal("a finite field has only p+1 regular points")
    ms = [kronecker_regular(field, l) for l in lams]
    proofs = []
    for i, j in itertools.combinations(range(count), 2):
        proofs.append(((lams[i], lams[j]), hom_dim(ms[i], ms[j]), hom_dim(ms[j], ms[i])))
    return list(zip(lams, ms)), proofs
