"""Quivers with length-two zero relations and their path algebras.

Conventions
-----------
* A path is stored as the tuple of its arrows *in traversal order*.  Written
  notation is function style (right to left): the path "a then b then c" is
  written ``cba`` and equals ``c ∘ b ∘ a``.
* A relation is stored as the traversal-ordered pair ``(alpha, beta)``:
  the 2-path "alpha then beta" is zero.  The JSON form ``[alpha, beta]``
  uses the same order.
* Modules are left modules.  ``P(v)`` is spanned by the nonzero paths that
  start at ``v``; a path ``p`` from ``w`` to ``v`` gives the map
  ``P(v) -> P(w)``, ``x ↦ x ∘ p``.  Hence composing module maps reverses the
  order of the paths: the map of ``p`` followed by the map of ``q`` is given by
  the path "q then p".
"""

from __future__ import annotations

import json
import string
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

Vertex = Hashable


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    source: Vertex
    target: Vertex
    label: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise AlgebraError("duplicate vertices")
        ids = [a.id for a in self.arrows]
        labels = [a.label for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise AlgebraError("arrow ids must be unique")
        if len(set(labels)) != len(labels):
            raise AlgebraError("arrow labels must be unique")
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise AlgebraError(f"arrow {a.id!r} has an endpoint outside the vertex set")

    @cached_property
    def arrow(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    def out_arrows(self, v) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def in_arrows(self, v) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]


@dataclass(frozen=True)
class Path:
    """A path in a quiver; ``arrows`` in traversal order, empty for trivial."""

    source: Vertex
    target: Vertex
    arrows: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @classmethod
    def trivial(cls, v) -> "Path":
        return cls(v, v, ())


@dataclass(frozen=True)
class GentleReport:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class GentlePresentation:
    """Quiver plus a set of traversal-ordered zero relations of length two."""

    quiver: Quiver
    relations: frozenset = field(default_factory=frozenset)
    name: str = ""

    def __post_init__(self) -> None:
        arrows = self.quiver.arrow
        for rel in self.relations:
            if len(rel) != 2:
                raise AlgebraError(f"relation {rel!r} is not a 2-path")
            a, b = rel
            if a not in arrows or b not in arrows:
                raise AlgebraError(f"relation {rel!r} uses an unknown arrow")
            if arrows[a].target != arrows[b].source:
                raise AlgebraError(f"relation {rel!r} is not composable")

    @property
    def vertices(self) -> tuple:
        return self.quiver.vertices

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.quiver.vertices)}

    def label(self, arrow_id: str) -> str:
        return self.quiver.arrow[arrow_id].label

    def is_relation(self, first: str, second: str) -> bool:
        return (first, second) in self.relations

    # -- path arithmetic -------------------------------------------------
    def is_zero_path(self, arrows: Sequence[str]) -> bool:
        return any((arrows[i], arrows[i + 1]) in self.relations for i in range(len(arrows) - 1))

    def make_path(self, arrows: Sequence[str], vertex=None) -> Path:
        arrows = tuple(arrows)
        if not arrows:
            if vertex is None:
                raise AlgebraError("trivial path needs a vertex")
            return Path.trivial(vertex)
        qa = self.quiver.arrow
        for x, y in zip(arrows, arrows[1:]):
            if qa[x].target != qa[y].source:
                raise AlgebraError(f"arrows {x!r} and {y!r} are not composable")
        return Path(qa[arrows[0]].source, qa[arrows[-1]].target, arrows)

    def compose_paths(self, p: Path, q: Path) -> Path | None:
        """``p ∘ q``: first ``q``, then ``p``.  ``None`` stands for zero."""
        if q.target != p.source:
            raise AlgebraError(f"cannot compose: {self.path_str(q)} ends at {q.target!r}, "
                               f"{self.path_str(p)} starts at {p.source!r}")
        if q.arrows and p.arrows and (q.arrows[-1], p.arrows[0]) in self.relations:
            return None
        return Path(q.source, p.target, q.arrows + p.arrows)

    def path_str(self, p: Path) -> str:
        if p.is_trivial:
            return f"e[{p.source}]"
        labels = [self.label(a) for a in reversed(p.arrows)]
        sep = "" if all(len(x) == 1 for x in labels) else "."
        return sep.join(labels)

    def parse_path(self, text: str) -> Path:
        """Parse the written (right-to-left) notation of :meth:`path_str`."""
        text = text.strip()
        if text.startswith("e[") and text.endswith("]"):
            return Path.trivial(self._parse_vertex(text[2:-1]))
        by_label = {a.label: a.id for a in self.quiver.arrows}
        if "." in text:
            tokens = text.split(".")
        else:
            tokens = _tokenize(text, sorted(by_label))
        try:
            ids = [by_label[t] for t in tokens]
        except KeyError as exc:
            raise AlgebraError(f"unknown arrow label {exc.args[0]!r}") from None
        return self.make_path(tuple(reversed(ids)))

    def _parse_vertex(self, text: str):
        for v in self.vertices:
            if str(v) == text.strip():
                return v
        raise AlgebraError(f"unknown vertex {text!r}")

    def parse_vertex(self, text) -> Vertex:
        if text in self.vertex_index:
            return text
        return self._parse_vertex(str(text))

    # -- compiled data ---------------------------------------------------
    @cached_property
    def compiled(self) -> "PathAlgebra":
        return PathAlgebra(self)

    def proj_hom_basis(self, v, w) -> list[Path]:
        """Basis of Hom(P(v), P(w)): the nonzero paths from ``w`` to ``v``."""
        pa = self.compiled
        return [pa.paths[k] for k in pa.paths_between(w, v)]

    def validate(self) -> GentleReport:
        return validate_gentle(self)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "vertices": list(self.quiver.vertices),
            "arrows": [{"id": a.id, "src": a.source, "tgt": a.target, "label": a.label}
                       for a in self.quiver.arrows],
            "relations": [list(r) for r in sorted(self.relations)],
        }


def _tokenize(text: str, labels: Sequence[str]) -> list[str]:
    # all tokenizations into known labels; exactly one is required
    n = len(text)
    ways: list[list[list[str]]] = [[] for _ in range(n + 1)]
    ways[0] = [[]]
    for i in range(n):
        if not ways[i]:
            continue
        for lab in labels:
            if text.startswith(lab, i):
                for w in ways[i]:
                    if len(ways[i + len(lab)]) < 2:
                        ways[i + len(lab)].append(w + [lab])
    if not ways[n]:
        raise AlgebraError(f"cannot parse path {text!r}")
    if len(ways[n]) > 1:
        raise AlgebraError(f"ambiguous path {text!r}; separate labels with '.'")
    return ways[n][0]


class PathAlgebra:
    """Basis of nonzero paths with multiplication table, for fast arithmetic.

    ``paths`` is deterministically ordered: trivial paths (vertex order) then
    by length, then by arrow-id tuple.  ``then_table[p, q]`` is the index of
    "path p followed by path q", or -1.
    """

    def __init__(self, pres: GentlePresentation, max_length: int | None = None) -> None:
        self.pres = pres
        q = pres.quiver
        cap = len(q.arrows) + 1 if max_length is None else max_length
        paths = [Path.trivial(v) for v in q.vertices]
        frontier = [(a.id,) for a in q.arrows]
        length = 1
        while frontier:
            if length >= cap:
                raise AlgebraError(
                    f"nonzero path of length {length} survives the cap {cap}: "
                    "the algebra is infinite dimensional")
            frontier.sort()
            for arrows in frontier:
                paths.append(pres.make_path(arrows))
            nxt = []
            for arrows in frontier:
                last = arrows[-1]
                for b in q.out_arrows(q.arrow[last].target):
                    if (last, b.id) not in pres.relations:
                        nxt.append(arrows + (b.id,))
            frontier = nxt
            length += 1
        self.length_cap = cap
        self.paths: list[Path] = paths
        self.index = {p: i for i, p in enumerate(paths)}
        n = len(paths)
        self.n = n
        self.src = np.array([pres.vertex_index[p.source] for p in paths])
        self.tgt = np.array([pres.vertex_index[p.target] for p in paths])
        self.length = np.array([p.length for p in paths])
        table = -np.ones((n, n), dtype=np.int64)
        for i, p in enumerate(paths):
            for j, r in enumerate(paths):
                if p.target != r.source:
                    continue
                c = pres.compose_paths(r, p)
                if c is not None:
                    table[i, j] = self.index[c]
        self.then_table = table
        struct = np.zeros((n, n, n), dtype=np.int64)
        ii, jj = np.nonzero(table >= 0)
        struct[ii, jj, table[ii, jj]] = 1
        self.struct = struct
        # sparse form of the table: path p then path q gives path r
        self.tri_p, self.tri_q = ii.astype(np.int64), jj.astype(np.int64)
        self.tri_r = table[ii, jj]
        self.tri_groups = [(r, np.flatnonzero(self.tri_r == r)) for r in np.unique(self.tri_r)]
        self.trivial = {v: self.index[Path.trivial(v)] for v in q.vertices}
        self.max_path_length = int(self.length.max()) if n else 0
        # projective bases: P(v) spanned by paths starting at v
        self.proj_basis: dict = {}
        for v in q.vertices:
            vi = pres.vertex_index[v]
            self.proj_basis[v] = [k for k in range(n) if self.src[k] == vi]
        self.proj_pos = {v: {k: i for i, k in enumerate(b)} for v, b in self.proj_basis.items()}

    def paths_between(self, source, target, radical: bool = False) -> list[int]:
        s = self.pres.vertex_index[source]
        t = self.pres.vertex_index[target]
        out = [k for k in range(self.n) if self.src[k] == s and self.tgt[k] == t]
        if radical:
            out = [k for k in out if self.length[k] > 0]
        return out

    def proj_dim(self, v) -> int:
        return len(self.proj_basis[v])

    def proj_dimvec(self, v) -> np.ndarray:
        dv = np.zeros(len(self.pres.vertices), dtype=np.int64)
        for k in self.proj_basis[v]:
            dv[self.tgt[k]] += 1
        return dv

    def cartan(self) -> np.ndarray:
        """Columns are the dimension vectors of the indecomposable projectives."""
        return np.stack([self.proj_dimvec(v) for v in self.pres.vertices], axis=1)

    def path_map_matrix(self, k: int, v, w) -> np.ndarray:
        """Matrix of the map P(v) -> P(w) given by path ``k`` (from w to v)."""
        bv, bw = self.proj_basis[v], self.proj_pos[w]
        M = np.zeros((len(bw), len(bv)), dtype=np.int64)
        for col, x in enumerate(bv):
            r = self.then_table[k, x]
            if r >= 0:
                M[bw[r], col] = 1
        return M

    def nonzero_letters(self):
        return [k for k in range(self.n) if self.length[k] > 0]


# -- validation ------------------------------------------------------------

def validate_gentle(p: GentlePresentation) -> GentleReport:
    q = p.quiver
    issues: list[str] = []
    for v in q.vertices:
        nin, nout = len(q.in_arrows(v)), len(q.out_arrows(v))
        if nout > 2:
            issues.append(f"vertex {v}: out-degree {nout}")
        if nin > 2:
            issues.append(f"vertex {v}: in-degree {nin}")
    for a in q.arrows:
        after = q.out_arrows(a.target)
        rel = [b.id for b in after if (a.id, b.id) in p.relations]
        free = [b.id for b in after if (a.id, b.id) not in p.relations]
        if len(rel) > 1:
            issues.append(f"arrow {a.id}: {len(rel)} relations start with it")
        if len(free) > 1:
            issues.append(f"arrow {a.id}: {len(free)} nonzero 2-paths start with it")
        before = q.in_arrows(a.source)
        rel = [b.id for b in before if (b.id, a.id) in p.relations]
        free = [b.id for b in before if (b.id, a.id) not in p.relations]
        if len(rel) > 1:
            issues.append(f"arrow {a.id}: {len(rel)} relations end with it")
        if len(free) > 1:
            issues.append(f"arrow {a.id}: {len(free)} nonzero 2-paths end with it")
    if not issues:
        try:
            PathAlgebra(p)
        except AlgebraError as exc:
            issues.append(str(exc))
    return GentleReport(not issues, tuple(issues))


def compose_paths(p: GentlePresentation, x: Path, y: Path) -> Path | None:
    return p.compose_paths(x, y)


def proj_hom_basis(p: GentlePresentation, v, w) -> list[Path]:
    return p.proj_hom_basis(v, w)


# -- constructors ------------------------------------------------------------

def _letters(count: int) -> list[str]:
    if count <= 26:
        return list(string.ascii_lowercase[:count])
    return [f"x{i}" for i in range(count)]


def build_lambda(r: int, n: int, m: int) -> GentlePresentation:
    """The derived-discrete algebra Λ(r, n, m).

    Tail vertices -m..-1 with arrows j -> j+1, cycle vertices 0..n-1 with
    arrows i -> i+1 (mod n), and ``r`` zero relations on the cycle composing
    through the vertices n-r+1, ..., n-1, 0.  Arrow labels are single letters
    assigned tail first, then around the cycle from vertex 0, so Λ(1,2,1) has
    a: -1 -> 0, b: 0 -> 1, c: 1 -> 0 and the zero relation ``bc``
    (c then b).
    """
    if n < 1 or r < 1 or r > n or m < 0:
        raise AlgebraError(f"invalid parameters Λ({r},{n},{m}): need 1 <= r <= n, m >= 0")
    names = _letters(m + n)
    verts = tuple(range(-m, 0)) + tuple(range(n))
    arrows = []
    for k, j in enumerate(range(-m, 0)):
        arrows.append(Arrow(names[k], j, j + 1, names[k]))
    cyc = []
    for i in range(n):
        lab = names[m + i]
        arrows.append(Arrow(lab, i, (i + 1) % n, lab))
        cyc.append(lab)
    rels = set()
    for v in [*(range(n - r + 1, n)), 0]:
        into = cyc[(v - 1) % n]
        out = cyc[v % n]
        rels.add((into, out))
    return GentlePresentation(Quiver(verts, tuple(arrows)), frozenset(rels), f"Lambda({r},{n},{m})")


def linear_a(n: int) -> GentlePresentation:
    """Linearly oriented A_n: 1 -> 2 -> ... -> n, no relations."""
    names = _letters(n - 1)
    arrows = tuple(Arrow(names[i], i + 1, i + 2, names[i]) for i in range(n - 1))
    return GentlePresentation(Quiver(tuple(range(1, n + 1)), arrows), frozenset(), f"A{n}")


def kronecker() -> GentlePresentation:
    """Kronecker quiver with two arrows x, y: 2 -> 1.

    Oriented so that maps P(1) -> P(2) are the combinations of x and y.
    """
    arrows = (Arrow("x", 2, 1, "x"), Arrow("y", 2, 1, "y"))
    return GentlePresentation(Quiver((1, 2), arrows), frozenset(), "Kronecker")


def from_json(data: dict) -> GentlePresentation:
    if "family" in data:
        fam = str(data["family"]).lower()
        if fam == "lambda":
            return build_lambda(int(data["r"]), int(data["n"]), int(data["m"]))
        if fam in ("a", "linear_a", "an"):
            return linear_a(int(data["n"]))
        if fam == "kronecker":
            return kronecker()
        raise AlgebraError(f"unknown family {data['family']!r}")
    for key in ("vertices", "arrows"):
        if key not in data:
            raise AlgebraError(f"algebra spec lacks {key!r}")
    verts = tuple(data["vertices"])
    vset = set(verts)
    arrows = []
    for a in data["arrows"]:
        if not isinstance(a, dict) or not {"id", "src", "tgt"} <= a.keys():
            raise AlgebraError(f"arrow entry {a!r} must be an object with id, src and tgt")
        aid = str(a["id"])
        if a["src"] not in vset or a["tgt"] not in vset:
            raise AlgebraError(f"arrow {aid!r} has an endpoint outside the vertex set")
        arrows.append(Arrow(aid, a["src"], a["tgt"], str(a.get("label", aid))))
    rels = frozenset(tuple(str(x) for x in r) for r in data.get("relations", []))
    return GentlePresentation(Quiver(verts, tuple(arrows)), rels, str(data.get("name", "")))


def parse_algebra_spec(text: str) -> GentlePresentation:
    """Parse and validate a JSON algebra spec; raises on any violation."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise AlgebraError("algebra spec must be a JSON object")
    pres = from_json(data)
    return pres


def degree_counts(p: GentlePresentation) -> dict:
    q = p.quiver
    return {v: (len(q.in_arrows(v)), len(q.out_arrows(v))) for v in q.vertices}


def multiset(items: Iterable) -> Counter:
    return Counter(items)
