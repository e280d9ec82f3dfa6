"""String and homotopy-string combinatorics for gentle algebras.

Walk conventions.  A walk visits vertices ``x_0, x_1, ..., x_L``.  A direct
letter ``p`` (a nonzero path, traversal order) has ``source(p) = x_{j-1}`` and
``target(p) = x_j``; an inverse letter ``p~`` has ``target(p) = x_{j-1}`` and
``source(p) = x_j``.

For homotopy strings a direct letter at position ``j`` is the differential
component ``P(x_j) -> P(x_{j-1})`` given by ``p``, so the cohomological degree
drops by one along a direct letter and rises by one along an inverse letter.
Compatibility at a junction ``x_j`` (letter ``p`` followed by ``q``):

* direct, direct   -- ``(last(p), first(q))`` is a relation (so d∘d = 0);
* inverse, inverse -- ``(last(q), first(p))`` is a relation;
* direct, inverse  -- the last arrows of ``p`` and ``q`` differ;
* inverse, direct  -- the first arrows of ``p`` and ``q`` differ.

String modules use single arrows as letters, must be reduced (no ``α α~``)
and avoid relations read in either direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .algebra import GentlePresentation
from .complexes import ProjComplex, cohomology_profile, profile_key
from .exactla import Field


class StringError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Letter:
    path: tuple          # arrow ids in traversal order, length >= 1
    inverse: bool = False

    @property
    def first(self) -> str:
        return self.path[0]

    @property
    def last(self) -> str:
        return self.path[-1]

    def flipped(self) -> "Letter":
        return Letter(self.path, not self.inverse)

    def key(self) -> tuple:
        return (self.inverse, len(self.path), self.path)


def _letter_ends(alg: GentlePresentation, l: Letter):
    a0, a1 = alg.quiver.arrow[l.path[0]], alg.quiver.arrow[l.path[-1]]
    src, tgt = a0.source, a1.target
    return (tgt, src) if l.inverse else (src, tgt)


def _compatible(alg: GentlePresentation, p: Letter, q: Letter) -> bool:
    """Homotopy-string junction rule for p followed by q."""
    if not p.inverse and not q.inverse:
        return alg.is_relation(p.last, q.first)
    if p.inverse and q.inverse:
        return alg.is_relation(q.last, p.first)
    if not p.inverse and q.inverse:
        return p.last != q.last
    return p.first != q.first


def _walk_compatible(alg: GentlePresentation, p: Letter, q: Letter) -> bool:
    """String-module junction rule (single arrows)."""
    if not p.inverse and not q.inverse:
        return not alg.is_relation(p.last, q.first)
    if p.inverse and q.inverse:
        return not alg.is_relation(q.last, p.first)
    return p.path != q.path


def format_letters(alg: GentlePresentation, start, letters: Sequence[Letter]) -> str:
    if not letters:
        return f"e({start})"
    out = []
    for l in letters:
        s = alg.path_str(alg.make_path(l.path))
        out.append(s + "~" if l.inverse else s)
    return ",".join(out)


def parse_letters(alg: GentlePresentation, text: str):
    text = text.strip()
    if text.startswith("e(") and text.endswith(")"):
        return alg.parse_vertex(text[2:-1]), ()
    letters = []
    for tok in text.split(","):
        tok = tok.strip()
        inv = tok.endswith("~")
        p = alg.parse_path(tok.rstrip("~"))
        if not p.arrows:
            raise StringError(f"trivial path {tok!r} is not a letter")
        letters.append(Letter(tuple(p.arrows), inv))
    start = _letter_ends(alg, letters[0])[0]
    return start, tuple(letters)


# -- homotopy strings ---------------------------------------------------------

@dataclass(frozen=True)
class HomotopyString:
    """A homotopy string with the degree of its first vertex."""

    algebra: GentlePresentation = dc_field(compare=False, hash=False, repr=False)
    start: object = None
    letters: tuple = ()
    shift: int = 0

    def __post_init__(self) -> None:
        check_homotopy_string(self.algebra, self.start, self.letters)

    @classmethod
    def parse(cls, alg: GentlePresentation, text: str, shift: int = 0) -> "HomotopyString":
        start, letters = parse_letters(alg, text)
        return cls(alg, start, letters, shift)

    def __str__(self) -> str:
        return format_letters(self.algebra, self.start, self.letters)

    @property
    def num_letters(self) -> int:
        return len(self.letters)

    def vertices(self) -> list:
        out = [self.start]
        for l in self.letters:
            out.append(_letter_ends(self.algebra, l)[1])
        return out

    def degrees(self) -> list[int]:
        out = [self.shift]
        for l in self.letters:
            out.append(out[-1] + (1 if l.inverse else -1))
        return out

    def reversed(self) -> "HomotopyString":
        letters = tuple(l.flipped() for l in reversed(self.letters))
        return HomotopyString(self.algebra, self.vertices()[-1], letters, self.degrees()[-1])

    def key(self) -> tuple:
        return (tuple(l.key() for l in self.letters), self.algebra.vertex_index[self.start])

    def canonical(self) -> "HomotopyString":
        """Lexicographically smaller orientation; realizes the same complex."""
        r = self.reversed()
        return r if r.key() < self.key() else self

    def normalized(self) -> "HomotopyString":
        """Canonical orientation with the first vertex in degree 0."""
        c = self.canonical()
        return HomotopyString(self.algebra, c.start, c.letters, 0)

    def shifted(self, k: int) -> "HomotopyString":
        """The string of Σ^k of the realized complex."""
        return HomotopyString(self.algebra, self.start, self.letters, self.shift - k)

    def ident(self) -> tuple:
        c = self.canonical()
        return (str(c), c.shift)

    def realize(self, field: Field) -> ProjComplex:
        return realize_string_complex(self.algebra, self, field)

    def to_dot(self) -> str:
        return walk_dot(self.algebra, self.vertices(), self.letters, self.degrees())


def check_homotopy_string(alg: GentlePresentation, start, letters: Sequence[Letter]) -> None:
    if start not in alg.vertex_index:
        raise StringError(f"unknown vertex {start!r}")
    x = start
    prev = None
    for l in letters:
        if not l.path or alg.is_zero_path(l.path):
            raise StringError(f"letter {l} is not a nonzero path")
        alg.make_path(l.path)
        s, t = _letter_ends(alg, l)
        if s != x:
            raise StringError(f"letter {format_letters(alg, s, [l])} does not start at {x}")
        if prev is not None and not _compatible(alg, prev, l):
            raise StringError(f"letters {format_letters(alg, x, [prev, l])} are not compatible")
        prev, x = l, t


def realize_string_complex(alg: GentlePresentation, h: HomotopyString, field: Field) -> ProjComplex:
    """One projective per walk vertex, differential entries given by the letters."""
    pa = alg.compiled
    verts, degs = h.vertices(), h.degrees()
    terms: dict[int, list] = {}
    pos = []
    for v, d in zip(verts, degs):
        terms.setdefault(d, []).append(v)
        pos.append(len(terms[d]) - 1)
    diffs = {d: field.zeros((len(terms.get(d + 1, ())), len(terms[d]), pa.n)) for d in terms
             if d + 1 in terms}
    for j, l in enumerate(h.letters, start=1):
        k = pa.index[alg.make_path(l.path)]
        if l.inverse:   # P(x_{j-1}) -> P(x_j), degree rises
            d = degs[j - 1]
            diffs[d][pos[j], pos[j - 1], k] = 1
        else:           # P(x_j) -> P(x_{j-1})
            d = degs[j]
            diffs[d][pos[j - 1], pos[j], k] = 1
    return ProjComplex(alg, field, {d: tuple(v) for d, v in terms.items()}, diffs)


@lru_cache(maxsize=None)
def homotopy_letters(alg: GentlePresentation) -> tuple:
    pa = alg.compiled
    out = []
    for p in pa.paths:
        if p.arrows:
            out.append(Letter(tuple(p.arrows), False))
            out.append(Letter(tuple(p.arrows), True))
    return tuple(sorted(out, key=Letter.key))


@lru_cache(maxsize=None)
def _successors(alg: GentlePresentation, walk: bool) -> dict:
    letters = walk_letters(alg) if walk else homotopy_letters(alg)
    rule = _walk_compatible if walk else _compatible
    by_start: dict = {}
    for l in letters:
        by_start.setdefault(_letter_ends(alg, l)[0], []).append(l)
    succ = {}
    for l in letters:
        t = _letter_ends(alg, l)[1]
        succ[l] = tuple(q for q in by_start.get(t, ()) if rule(alg, l, q))
    succ[None] = by_start
    return succ


def iter_homotopy_words(alg: GentlePresentation, max_letters: int) -> Iterator[tuple]:
    """All (start, letters) with 1..max_letters letters, both orientations."""
    if max_letters < 1:
        return
    succ = _successors(alg, False)
    stack = [(l,) for l in reversed(homotopy_letters(alg))]
    while stack:
        w = stack.pop()
        yield _letter_ends(alg, w[0])[0], w
        if len(w) < max_letters:
            for q in reversed(succ[w[-1]]):
                stack.append(w + (q,))


def enumerate_homotopy_strings(alg: GentlePresentation, max_letters: int) -> list[HomotopyString]:
    """Canonical homotopy strings with at most ``max_letters`` letters.

    Each string is shift-normalized (first vertex in degree 0).  Sorted by
    letter count then canonical key.
    """
    out = [HomotopyString(alg, v, (), 0) for v in alg.vertices]
    for start, w in iter_homotopy_words(alg, max_letters):
        h = HomotopyString(alg, start, w, 0)
        if h.canonical().key() == h.key():
            out.append(h)
    return sorted(out, key=lambda h: (h.num_letters, h.key()))


# -- bands --------------------------------------------------------------------

def _min_rotation(seq: tuple) -> tuple:
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


def _is_power(seq: tuple) -> bool:
    n = len(seq)
    return any(n % k == 0 and seq == seq[:k] * (n // k) for k in range(1, n))


@dataclass(frozen=True)
class HomotopyBand:
    algebra: GentlePresentation = dc_field(compare=False, hash=False, repr=False)
    letters: tuple = ()

    def __str__(self) -> str:
        start = _letter_ends(self.algebra, self.letters[0])[0]
        return "(" + format_letters(self.algebra, start, self.letters) + ")"

    def realize(self, field: Field, lam=1) -> ProjComplex:
        """Band complex with one-dimensional parameter ``lam`` on the first letter."""
        alg, pa = self.algebra, self.algebra.compiled
        n = len(self.letters)
        verts = [_letter_ends(alg, l)[0] for l in self.letters]
        degs = [0]
        for l in self.letters[:-1]:
            degs.append(degs[-1] + (1 if l.inverse else -1))
        terms: dict[int, list] = {}
        pos = []
        for v, d in zip(verts, degs):
            terms.setdefault(d, []).append(v)
            pos.append(len(terms[d]) - 1)
        diffs = {d: field.zeros((len(terms.get(d + 1, ())), len(terms[d]), pa.n)) for d in terms
                 if d + 1 in terms}
        for j, l in enumerate(self.letters):
            a, b = j, (j + 1) % n
            k = pa.index[alg.make_path(l.path)]
            c = field.scalar(lam) if j == 0 else 1
            if l.inverse:
                diffs[degs[a]][pos[b], pos[a], k] = c
            else:
                diffs[degs[b]][pos[a], pos[b], k] = c
        return ProjComplex(alg, field, {d: tuple(v) for d, v in terms.items()}, diffs)


def _cyclic_canonical(seq: tuple) -> tuple:
    rev = tuple(l.flipped() for l in reversed(seq))
    best = None
    for s in (seq, rev):
        for i in range(len(s)):
            r = s[i:] + s[:i]
            k = tuple(x.key() for x in r)
            if best is None or k < best[0]:
                best = (k, r)
    return best[1]


def _detect_cycles(alg: GentlePresentation, max_letters: int, walk: bool, balanced) -> list[tuple]:
    succ = _successors(alg, walk)
    rule = _walk_compatible if walk else _compatible
    letters = walk_letters(alg) if walk else homotopy_letters(alg)
    found = set()
    for first in letters:
        start = _letter_ends(alg, first)[0]
        stack = [(first,)]
        while stack:
            w = stack.pop()
            end = _letter_ends(alg, w[-1])[1]
            if end == start and rule(alg, w[-1], w[0]) and balanced(w) and not _is_power(w):
                found.add(_cyclic_canonical(w))
            if len(w) < max_letters:
                for q in succ[w[-1]]:
                    # only extend from the minimal rotation start to save work
                    if q.key() >= first.key():
                        stack.append(w + (q,))
    return sorted(found, key=lambda s: (len(s), tuple(x.key() for x in s)))


def detect_bands(alg: GentlePresentation, max_letters: int) -> list[HomotopyBand]:
    """Cyclic homotopy strings with degree sum zero, up to rotation and inversion."""
    def balanced(w):
        return sum(1 if l.inverse else -1 for l in w) == 0
    return [HomotopyBand(alg, s) for s in _detect_cycles(alg, max_letters, False, balanced)]


# -- string modules -----------------------------------------------------------

@lru_cache(maxsize=None)
def walk_letters(alg: GentlePresentation) -> tuple:
    out = []
    for a in alg.quiver.arrows:
        out.append(Letter((a.id,), False))
        out.append(Letter((a.id,), True))
    return tuple(sorted(out, key=Letter.key))


@dataclass(frozen=True)
class StringWalk:
    algebra: GentlePresentation = dc_field(compare=False, hash=False, repr=False)
    start: object = None
    letters: tuple = ()

    def __post_init__(self) -> None:
        alg = self.algebra
        if self.start not in alg.vertex_index:
            raise StringError(f"unknown vertex {self.start!r}")
        x, prev = self.start, None
        for l in self.letters:
            if len(l.path) != 1:
                raise StringError("walk letters are single arrows")
            s, t = _letter_ends(alg, l)
            if s != x:
                raise StringError(f"walk letter {l.path[0]} does not start at {x}")
            if prev is not None and not _walk_compatible(alg, prev, l):
                raise StringError(f"walk {format_letters(alg, self.start, self.letters)} is not a string")
            prev, x = l, t

    @classmethod
    def parse(cls, alg: GentlePresentation, text: str) -> "StringWalk":
        start, letters = parse_letters(alg, text)
        return cls(alg, start, letters)

    def __str__(self) -> str:
        return format_letters(self.algebra, self.start, self.letters)

    def vertices(self) -> list:
        out = [self.start]
        for l in self.letters:
            out.append(_letter_ends(self.algebra, l)[1])
        return out

    def reversed(self) -> "StringWalk":
        return StringWalk(self.algebra, self.vertices()[-1],
                          tuple(l.flipped() for l in reversed(self.letters)))

    def key(self) -> tuple:
        return (tuple(l.key() for l in self.letters), self.algebra.vertex_index[self.start])

    def canonical(self) -> "StringWalk":
        r = self.reversed()
        return r if r.key() < self.key() else self

    def dimvec(self) -> np.ndarray:
        vi = self.algebra.vertex_index
        out = np.zeros(len(vi), dtype=np.int64)
        for v in self.vertices():
            out[vi[v]] += 1
        return out

    def to_dot(self) -> str:
        return walk_dot(self.algebra, self.vertices(), self.letters, None)


def realize_string_module(alg: GentlePresentation, w: StringWalk, field: Field):
    """The string module: one basis vector per walk vertex."""
    from .modules import Module
    verts = w.vertices()
    local: dict = {}
    idx = []
    for v in verts:
        local[v] = local.get(v, 0) + 1
        idx.append(local[v] - 1)
    dims = {v: local.get(v, 0) for v in alg.vertices}
    maps = {}
    for a in alg.quiver.arrows:
        maps[a.id] = field.zeros((dims[a.target], dims[a.source]))
    for j, l in enumerate(w.letters, start=1):
        a = l.path[0]
        if l.inverse:   # arrow maps z_j to z_{j-1}
            maps[a][idx[j - 1], idx[j]] = 1
        else:
            maps[a][idx[j], idx[j - 1]] = 1
    return Module(alg, field, dims, maps)


def iter_walks(alg: GentlePresentation, max_letters: int) -> Iterator[StringWalk]:
    for v in alg.vertices:
        yield StringWalk(alg, v, ())
    if max_letters < 1:
        return
    succ = _successors(alg, True)
    stack = [(l,) for l in reversed(walk_letters(alg))]
    while stack:
        w = stack.pop()
        yield StringWalk(alg, _letter_ends(alg, w[0])[0], w)
        if len(w) < max_letters:
            for q in reversed(succ[w[-1]]):
                stack.append(w + (q,))


def detect_module_bands(alg: GentlePresentation, max_letters: int) -> list[tuple]:
    def mixed(w):
        return any(l.inverse for l in w) and any(not l.inverse for l in w)
    return _detect_cycles(alg, max_letters, True, mixed)


@dataclass
class StringModuleEnumeration:
    walks: list
    bands: list

    @property
    def band_present(self) -> bool:
        return bool(self.bands)


def enumerate_string_modules(alg: GentlePresentation, target: Sequence[int]) -> StringModuleEnumeration:
    """Canonical walks whose string module has dimension vector ``target``."""
    target = np.asarray(target, dtype=np.int64)
    total = int(target.sum())
    if total == 0:
        return StringModuleEnumeration([], [])
    vi = alg.vertex_index
    out = []
    succ = _successors(alg, True)
    starts = [(v, (), np.eye(len(vi), dtype=np.int64)[vi[v]]) for v in alg.vertices
              if target[vi[v]] > 0]
    stack = list(reversed(starts))
    while stack:
        v, w, dv = stack.pop()
        if int(dv.sum()) == total:
            if np.array_equal(dv, target):
                sw = StringWalk(alg, v, w)
                if sw.canonical().key() == sw.key():
                    out.append(sw)
            continue
        nxt = succ[w[-1]] if w else succ[None].get(v, ())
        for q in reversed(nxt):
            t = _letter_ends(alg, q)[1]
            if dv[vi[t]] < target[vi[t]]:
                d2 = dv.copy()
                d2[vi[t]] += 1
                stack.append((v, w + (q,), d2))
    out.sort(key=StringWalk.key)
    bands = [b for b in detect_module_bands(alg, total) if _band_dimvec_fits(alg, b, target)]
    return StringModuleEnumeration(out, bands)


def _band_dimvec_fits(alg, band, target) -> bool:
    vi = alg.vertex_index
    dv = np.zeros(len(vi), dtype=np.int64)
    for l in band:
        dv[vi[_letter_ends(alg, l)[0]]] += 1
    return bool(np.all(dv <= target))


# -- DOT ----------------------------------------------------------------------

def walk_dot(alg: GentlePresentation, verts, letters, degrees) -> str:
    lines = ["digraph walk {", "  rankdir=LR;"]
    for j, v in enumerate(verts):
        lab = f"P({v})" if degrees is not None else str(v)
        if degrees is not None:
            lab += f"\\ndeg {degrees[j]}"
        lines.append(f'  n{j} [label="{lab}"];')
    for j, l in enumerate(letters, start=1):
        name = alg.path_str(alg.make_path(l.path))
        if degrees is not None:
            a, b = (j - 1, j) if l.inverse else (j, j - 1)
        else:
            a, b = (j, j - 1) if l.inverse else (j - 1, j)
        lines.append(f'  n{a} -> n{b} [label="{name}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def profile_of(h: HomotopyString, field: Field) -> tuple:
    return profile_key(cohomology_profile(h.realize(field)))


def strings_by_letters(strings: Iterable[HomotopyString]) -> dict[int, int]:
    out: dict[int, int] = {}
    for h in strings:
        out[h.num_letters] = out.get(h.num_letters, 0) + 1
    return out
