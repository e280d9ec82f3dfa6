import pytest
from hypothesis import given, strategies as st

from gentle_discrete.exactla import GF2, GF3, QQ
from gentle_discrete.modules import hom_dim, is_indecomposable, is_isomorphic_modules
from gentle_discrete.zoo import (INFINITY, TubeObject, kronecker_points, kronecker_preprojective,
                                 kronecker_regular, table_cells, tube_hom, tube_hom_bound)


def test_tube_object_range():
    with pytest.raises(ValueError):
        TubeObject(4, 4)
    with pytest.raises(ValueError):
        TubeObject(1, 1)


def test_tube_examples():
    assert tube_hom(4, 2, 2) == 2 and tube_hom(5, 1, 4) == 1 and tube_hom(6, 3, 3) == 3
    assert [tube_hom_bound(n) for n in range(2, 10)] == [n // 2 for n in range(2, 10)]


@given(st.integers(2, 9), st.data(), st.sampled_from([GF2, GF3, QQ]))
def test_tube_hom_closed_form(n, data, field):
    # stable homs between X_i and X_j over k[x]/(x^n)
    i = data.draw(st.integers(1, n - 1))
    j = data.draw(st.integers(1, n - 1))
    assert tube_hom(n, i, j, field) == min(i, j, n - i, n - j)


def test_kronecker_regular_family():
    pts = kronecker_points(GF3)
    assert pts == [0, 1, 2, INFINITY]
    ms = [kronecker_regular(GF3, p) for p in pts]
    for a, x in enumerate(ms):
        assert is_indecomposable(x)
        for b, y in enumerate(ms):
            assert is_isomorphic_modules(x, y) == (a == b)
    with pytest.raises(ValueError):
        kronecker_points(QQ)


def test_kronecker_preprojectives():
    for k in range(1, 4):
        M = kronecker_preprojective(QQ, k)
        assert M.dimvec().tolist() == [k + 1, k] and is_indecomposable(M)
        assert hom_dim(M, M) == 1


def test_table_quick():
    cells = table_cells(quick=True)
    assert all(c.agrees for c in cells)
    rows = {(c.row, c.column) for c in cells}
    assert ("discrete hearts", "F2 Kronecker") in rows and ("H-discrete", "Q Kronecker") in rows
    assert set(cells[0].to_json()) == {"row", "column", "expected", "computed", "agrees", "evidence"}
