import itertools
import json

import pytest
from hypothesis import given, strategies as st

from gentle_discrete.algebra import (AlgebraError, Arrow, GentlePresentation, PathAlgebra, Quiver,
                                     build_lambda, compose_paths, from_json, kronecker, linear_a,
                                     parse_algebra_spec, proj_hom_basis, validate_gentle)

ZOO = [build_lambda(*p) for p in [(1, 1, 0), (1, 2, 1), (1, 3, 0), (2, 2, 0), (2, 3, 0),
                                  (2, 4, 1), (2, 3, 1), (3, 3, 2)]] + [linear_a(3), kronecker()]


def paths(alg, *texts):
    return [alg.parse_path(t) for t in texts]


def test_lambda_121_shape():
    L = build_lambda(1, 2, 1)
    assert L.vertices == (-1, 0, 1)
    ends = {a.id: (a.source, a.target) for a in L.quiver.arrows}
    assert ends == {"a": (-1, 0), "b": (0, 1), "c": (1, 0)}
    # the single zero relation: c then b, written bc, composing through vertex 0
    assert L.relations == frozenset({("c", "b")})


def test_lambda_110_is_dual_numbers():
    L = build_lambda(1, 1, 0)
    assert L.vertices == (0,)
    assert [(a.source, a.target) for a in L.quiver.arrows] == [(0, 0)]
    assert L.relations == frozenset({("a", "a")})
    assert L.compiled.proj_dim(0) == 2


def test_lambda_230_gentle():
    L = build_lambda(2, 3, 0)
    assert len(L.vertices) == 3 and len(L.quiver.arrows) == 3 and len(L.relations) == 2
    assert validate_gentle(L)


@pytest.mark.parametrize("args", [(3, 2, 0), (1, 0, 0), (0, 2, 1), (1, 2, -1)])
def test_lambda_rejects(args):
    with pytest.raises(AlgebraError):
        build_lambda(*args)


def test_validator_examples():
    assert validate_gentle(build_lambda(1, 2, 1)).ok
    assert validate_gentle(linear_a(3)).ok
    star = GentlePresentation(Quiver((0, 1, 2, 3), tuple(Arrow(f"s{i}", 0, i, f"s{i}") for i in (1, 2, 3))))
    rep = validate_gentle(star)
    assert not rep.ok
    assert any("out-degree 3" in v for v in rep.violations)


def test_validator_flags_missing_relation():
    # a 2-cycle without relations is infinite dimensional
    q = Quiver((0, 1), (Arrow("x", 0, 1, "x"), Arrow("y", 1, 0, "y")))
    assert not validate_gentle(GentlePresentation(q))


def test_validator_flags_two_relations_from_one_arrow():
    q = Quiver((0, 1, 2, 3), (Arrow("x", 0, 1, "x"), Arrow("y", 1, 2, "y"), Arrow("z", 1, 3, "z")))
    p = GentlePresentation(q, frozenset({("x", "y"), ("x", "z")}))
    assert any("relations start" in v for v in validate_gentle(p).violations)


@pytest.mark.parametrize("alg", ZOO, ids=lambda a: a.name)
def test_zoo_degree_bound(alg):
    assert validate_gentle(alg)
    for v in alg.vertices:
        assert len(alg.quiver.in_arrows(v)) <= 2 and len(alg.quiver.out_arrows(v)) <= 2


def test_compose_relation_is_zero():
    L = build_lambda(1, 2, 1)
    b, c = paths(L, "b", "c")
    assert compose_paths(L, b, c) is None          # c then b
    assert compose_paths(L, c, b) is not None      # b then c survives


def test_compose_trivial_is_identity():
    L = build_lambda(1, 2, 1)
    (a,) = paths(L, "a")
    e = L.parse_path("e[0]")
    assert compose_paths(L, e, a) == a


def test_compose_cba_nonzero():
    L = build_lambda(1, 2, 1)
    a, cb = paths(L, "a", "cb")
    p = compose_paths(L, cb, a)
    assert p is not None and L.path_str(p) == "cba"
    assert (p.source, p.target) == (-1, 0)


def test_compose_not_composable():
    L = build_lambda(1, 2, 1)
    a, c = paths(L, "a", "c")
    with pytest.raises(AlgebraError):
        compose_paths(L, a, a)


def test_proj_hom_basis_examples():
    L = build_lambda(1, 2, 1)
    assert sorted(L.path_str(p) for p in proj_hom_basis(L, 0, -1)) == ["a", "cba"]
    for alg in ZOO:
        for v in alg.vertices:
            assert any(p.is_trivial for p in proj_hom_basis(alg, v, v))


def test_proj_hom_basis_lambda_230():
    L = build_lambda(2, 3, 0)
    for v, w in itertools.product(L.vertices, repeat=2):
        assert sum(not p.is_trivial for p in proj_hom_basis(L, v, w)) <= 1


def test_path_cap_leaves_no_survivor():
    for alg in ZOO:
        pa = alg.compiled
        assert pa.max_path_length < pa.length_cap


def test_path_cap_override_detects_overflow():
    with pytest.raises(AlgebraError):
        PathAlgebra(build_lambda(1, 3, 0), max_length=2)


@given(st.sampled_from(ZOO), st.data())
def test_composition_associative(alg, data):
    pa = alg.compiled
    ps = pa.paths
    x = data.draw(st.sampled_from(ps))
    ys = [p for p in ps if p.source == x.target]
    y = data.draw(st.sampled_from(ys))
    zs = [p for p in ps if p.source == y.target]
    z = data.draw(st.sampled_from(zs))
    # zero absorbs: (z∘y)∘x vs z∘(y∘x)
    zy = alg.compose_paths(z, y)
    left = None if zy is None else alg.compose_paths(zy, x)
    yx = alg.compose_paths(y, x)
    right = None if yx is None else alg.compose_paths(z, yx)
    assert left == right


def test_json_roundtrip_and_shorthand():
    L = build_lambda(1, 2, 1)
    again = from_json(json.loads(json.dumps(L.to_json())))
    assert again.relations == L.relations and again.quiver == L.quiver
    short = parse_algebra_spec('{"family": "lambda", "r": 1, "n": 2, "m": 1}')
    assert short.relations == L.relations
    with pytest.raises(AlgebraError):
        parse_algebra_spec("[1, 2]")
    with pytest.raises(AlgebraError):
        parse_algebra_spec('{"vertices": [0], "arrows": [{"id": "x", "src": 0, "tgt": 5}]}')


def test_cartan_columns():
    L = build_lambda(1, 2, 1)
    assert L.compiled.cartan().T.tolist() == [[1, 2, 1], [0, 2, 1], [0, 1, 1]]
