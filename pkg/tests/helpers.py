"""Shared fixtures and hypothesis strategies for the test suite."""

from functools import lru_cache

from hypothesis import strategies as st

from gentle_discrete.algebra import build_lambda
from gentle_discrete.complexes import ChainMap, build_complex, direct_sum, shift
from gentle_discrete.exactla import GF2, GF3, QQ
from gentle_discrete.homcat import chain_map_basis
from gentle_discrete.strings import enumerate_homotopy_strings

L121 = build_lambda(1, 2, 1)
L230 = build_lambda(2, 3, 0)
L110 = build_lambda(1, 1, 0)
L220 = build_lambda(2, 2, 0)

FIELDS = [GF2, GF3, QQ]


def worked_A(field=GF2):
    """P(0) -> P(0) ⊕ P(-1) by (cb, a) in degrees -1, 0."""
    return build_complex(L121, field, {-1: (0,), 0: (0, -1)},
                         [(-1, 0, 0, "cb", 1), (-1, 1, 0, "a", 1)])


def worked_B(field=GF2):
    """P(0) -> P(-1) by cba in degrees -1, 0."""
    return build_complex(L121, field, {-1: (0,), 0: (-1,)}, [(-1, 0, 0, "cba", 1)])


@lru_cache(maxsize=None)
def strings_of(alg, letters):
    return tuple(enumerate_homotopy_strings(alg, letters))


ALGS = [L121, L230, L110]


@st.composite
def string_complexes(draw, algs=ALGS, letters=3, fields=FIELDS):
    alg = draw(st.sampled_from(algs))
    field = draw(st.sampled_from(fields))
    h = draw(st.sampled_from(strings_of(alg, letters)))
    k = draw(st.integers(-2, 2))
    return shift(h.realize(field), k)


@st.composite
def sum_complexes(draw, max_summands=3, letters=3):
    alg = draw(st.sampled_from(ALGS))
    field = draw(st.sampled_from(FIELDS))
    n = draw(st.integers(1, max_summands))
    parts = []
    for _ in range(n):
        h = draw(st.sampled_from(strings_of(alg, letters)))
        parts.append(shift(h.realize(field), draw(st.integers(-1, 1))))
    return direct_sum(*parts)


def random_chain_map(draw, A, B):
    basis = chain_map_basis(A, B)
    f = ChainMap.zero(A, B)
    scalars = [0, 1, -1, 2]
    for g in basis:
        c = draw(st.sampled_from(scalars))
        if c:
            f = f + g.scale(A.field.scalar(c))
    return f


@st.composite
def chain_maps(draw, letters=3):
    alg = draw(st.sampled_from(ALGS))
    field = draw(st.sampled_from(FIELDS))
    A = draw(st.sampled_from(strings_of(alg, letters))).realize(field)
    B = draw(st.sampled_from(strings_of(alg, letters))).realize(field)
    A = shift(A, draw(st.integers(-1, 1)))
    return random_chain_map(draw, A, B)


# acceptance lines, printed by the terminal summary hook in conftest
ACCEPTANCE: list[str] = []


def record(criterion: str, ok: bool, detail: str, seconds: float, limit: float) -> bool:
    within = seconds < limit
    status = "PASS" if ok and within else "FAIL"
    ACCEPTANCE.append(f"[{status}] {criterion}: {detail} ({seconds:.1f}s, limit {limit:.0f}s)")
    print(ACCEPTANCE[-1], flush=True)
    return ok and within
