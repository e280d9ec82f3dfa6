import pytest
from hypothesis import given, strategies as st

from gentle_discrete.algebra import kronecker, linear_a
from gentle_discrete.complexes import cohomology_profile, profile_key
from gentle_discrete.discreteness import (FiberQuery, Refusal, abelian_fiber, c_fiber, cone_census,
                                          factor_classes, h_fiber, hom_bound_scan, kronecker_family,
                                          letter_bound, middle_classes, sub_classes_bruteforce,
                                          uniqueness_check)
from gentle_discrete.exactla import GF2, GF3, QQ
from gentle_discrete.homcat import hom_dim_kb
from gentle_discrete.modules import projective_module, simple_module
from gentle_discrete.oracles import exact_sequence_middles

from helpers import L121, L220, L230, strings_of, worked_A, worked_B


def test_letter_bound():
    # mass * (longest path + 1) + degree span
    assert letter_bound(L121, {0: (1, 1, 0)}) == 8
    assert letter_bound(L121, {-1: (0, 1, 1), 0: (1, 1, 1)}) == 21
    assert letter_bound(L121, {}) == 0


@pytest.mark.parametrize("profile,labels", [
    ({0: (1, 1, 0)}, ["ba@0"]),
    ({0: (1, 2, 1)}, ["e(-1)@0", "a,cb~@0"]),
    ({-1: (0, 1, 1), 0: (1, 1, 1)}, ["cba@0"]),
    ({0: (0, 1, 0)}, ["b@0"]),
    ({0: (1, 0, 1)}, []),
])
def test_h_fiber_examples(profile, labels):
    res = h_fiber(FiberQuery(L121, "heart", profile, GF2))
    assert res.labels() == labels
    for m in res.members:
        assert profile_key(cohomology_profile(m.complex)) == profile_key(profile)


def test_h_fiber_shift_equivariant():
    a = h_fiber(FiberQuery(L121, "heart", {0: (1, 2, 1)}, GF3)).labels()
    b = h_fiber(FiberQuery(L121, "heart", {3: (1, 2, 1)}, GF3)).labels()
    assert [x.split("@")[0] for x in a] == [x.split("@")[0] for x in b]
    assert [int(x.split("@")[1]) + 3 for x in a] == [int(x.split("@")[1]) for x in b]


def test_h_fiber_refuses_bands():
    with pytest.raises(Refusal) as err:
        h_fiber(FiberQuery(kronecker(), "heart", {0: (1, 1)}, GF2))
    assert err.value.detail == ["(x,y~)"]


def test_fiber_query_validates():
    with pytest.raises(ValueError):
        FiberQuery(L121, "sideways", {})


def test_c_fiber_examples():
    assert c_fiber(FiberQuery(L220, "coheart", {0: [0], 1: [1]}, GF2)).labels() == ["b@1"]
    assert c_fiber(FiberQuery(L121, "coheart", {-1: [0], 0: [0, -1]}, GF2)).labels() == ["a,cb~@0"]
    kr = c_fiber(FiberQuery(kronecker(), "coheart", {-1: [1], 0: [2]}, GF2))
    assert kr.method == "exhaustive" and len(kr) == 3
    with pytest.raises(Refusal):
        c_fiber(FiberQuery(kronecker(), "coheart", {-1: [1], 0: [2]}, QQ))


@given(st.sampled_from([L121, L230, L220]), st.data())
def test_h_fiber_contains_every_string(alg, data):
    h = data.draw(st.sampled_from(strings_of(alg, 4)))
    C = h.realize(GF2)
    prof = {d: tuple(int(x) for x in v) for d, v in cohomology_profile(C).items()}
    if alg is L220 and not prof:
        return
    res = h_fiber(FiberQuery(alg, "heart", prof, GF2))
    assert h.ident() in {(str(m.string), m.string.shift) for m in res.members}


def test_hom_bound_scan_small():
    s = hom_bound_scan(L121, 4)
    assert s.max_dim == 2 and s.witness_strings == (("e(0)", 0), ("e(-1)", 0))
    A, B = s.witness
    assert hom_dim_kb(A, B) == 2
    assert hom_bound_scan(L230, 4).max_dim == 1


def test_cone_census_worked_example():
    for field in (GF2, GF3):
        res = cone_census(worked_A(field), worked_B(field))
        labels = [c.labels for c in res.nonzero_classes()]
        assert ["a@0", "e(-1)@-1"] in labels and ["a,cb~,cba~@-1", "e(0)@-1"] in labels
        assert res.exhaustive and res.hom_dim == 2


def test_cone_census_modes_agree():
    A, B = worked_A(GF3), worked_B(GF3)
    chain = {tuple(c.labels) for c in cone_census(A, B, mode="chain").nonzero_classes()}
    homot = {tuple(c.labels) for c in cone_census(A, B, mode="homotopy").nonzero_classes()}
    assert chain == homot


def test_cone_census_rational_is_sampled():
    res = cone_census(worked_A(QQ), worked_B(QQ), samples=6)
    assert not res.exhaustive and res.maps_checked == 7


def test_cone_census_budget():
    with pytest.raises(Refusal):
        cone_census(worked_A(GF3), worked_B(GF3), budget=3)


def test_uniqueness():
    assert uniqueness_check(L230, 5).ok
    res = uniqueness_check(L220, 4)
    # P(0) and P(1) both have cohomology of dimension vector (1, 1)
    assert not res.ok and res.collision == ("e(0)", "e(1)")


def test_abelian_fibers():
    assert [m.label for m in abelian_fiber(kronecker(), (1, 1), GF2)][:2] == ["x", "y"]
    assert len(abelian_fiber(kronecker(), (1, 1), GF3)) == 4
    assert [m.label for m in abelian_fiber(linear_a(2), (1, 1), GF2)] == ["a"]
    with pytest.raises(Refusal):
        abelian_fiber(kronecker(), (1, 1), QQ)


def test_sub_and_factor_classes():
    P = projective_module(linear_a(2), GF2, 1)
    assert sub_classes_bruteforce(P) == {(0, 0), (0, 1), (1, 1)}
    assert factor_classes(P) == {(1, 1), (1, 0), (0, 0)}
    with pytest.raises(Refusal):
        sub_classes_bruteforce(P, max_dim=1)


def test_middle_classes_contain_exact_middles():
    A2 = linear_a(2)
    S1, S2 = simple_module(A2, GF2, 1), simple_module(A2, GF2, 2)
    pred = middle_classes(S2, S1)
    found = exact_sequence_middles(S2, S1)
    assert found <= pred and (1, 1) in found


def test_kronecker_family():
    fam, proofs = kronecker_family(QQ, 6)
    assert len(fam) == 6 and all(a == b == 0 for _, a, b in proofs)
    with pytest.raises(Refusal):
        kronecker_family(GF2, 4)
