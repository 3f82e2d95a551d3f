import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heislw.errors import BadField, DimensionMismatch
from heislw.field import field_for_order
from heislw.group import HeisenbergGroup
from heislw.sets import HSubset
from heislw.subgroups import (
    closure,
    enumerate_isotropic,
    enumerate_subgroups,
    enumerate_subspaces,
    gr_count,
    heis_complement,
    homogeneous_count_formula,
    ig_count,
    is_isotropic,
    is_subgroup,
    matches_homogeneous_shape,
    orbit_census,
    rref,
    subgroup_count_formula,
    subspace_to_subgroup,
    classify_subgroup,
)

F3 = field_for_order(3)


def test_rref_values():
    assert rref([(1, 1), (2, 2)], F3).basis == ((1, 1),)
    assert rref([(1, 0), (0, 1)], F3).basis == ((1, 0), (0, 1))
    assert rref([(0, 0)], F3).dim == 0


def test_is_subgroup_values():
    g = HeisenbergGroup(1, 3)
    assert is_subgroup(g, g.coordinate_subgroup(1, "vertical_W"))
    assert not is_subgroup(g, HSubset.from_points(g, [(0, 0, 0), (1, 0, 0)]))
    assert not is_subgroup(g, HSubset.empty(g))


def test_closure_values():
    assert closure(HeisenbergGroup(1, 3), []).elements == (0,)
    c = closure(HeisenbergGroup(1, 5), [(1, 0, 0)])
    assert c.order == 5 and {tuple(p) for p in c.points()} == {(k, 0, 0) for k in range(5)}
    assert closure(HeisenbergGroup(1, 3), [(1, 0, 0), (0, 1, 0)]).order == 27


def test_classification_values():
    for p in (3, 5):
        g = HeisenbergGroup(1, p)
        W1 = classify_subgroup(closure(g, [(0, 1, 0), (0, 0, 1)]))
        assert W1.kind == "product" and W1.S.basis == ((0, 1),)
        L1 = classify_subgroup(closure(g, [(1, 0, 0)]))
        assert L1.kind == "graph" and L1.S.basis == ((1, 0),) and L1.rho == (0,)
        Z = classify_subgroup(closure(g, [(0, 0, 1)]))
        assert Z.kind == "product" and Z.S.dim == 0
        tilted = classify_subgroup(closure(g, [(1, 0, 1)]))
        assert tilted.kind == "graph" and tilted.rho == (1,) and not tilted.homogeneous


def test_isotropy():
    F = F3
    assert is_isotropic(rref([(1, 2)], F), 1)
    assert is_isotropic(rref([(1, 0, 0, 0), (0, 1, 0, 0)], F), 2)
    assert not is_isotropic(rref([(1, 0, 0, 0), (0, 0, 1, 0)], F), 2)
    with pytest.raises(DimensionMismatch):
        is_isotropic(rref([(1, 0, 0)], F), 2)


def test_counts_values():
    assert len(enumerate_subspaces(2, 1, F3)) == 4 == gr_count(1, 2, 3)
    assert len(enumerate_subspaces(4, 2, F3)) == 130 == gr_count(2, 4, 3)
    assert len(enumerate_isotropic(2, 2, F3)) == 40 == ig_count(2, 4, 3)
    assert ig_count(1, 4, 3) == 40
    for q in (3, 5, 7, 9):
        assert ig_count(1, 2, q) == q + 1
    assert subgroup_count_formula(1, 3) == 19 and subgroup_count_formula(1, 3, "kp") == 18
    assert subgroup_count_formula(1, 5) == 39
    assert homogeneous_count_formula(1, 3) == 11
    with pytest.raises(BadField):
        subgroup_count_formula(1, 9)


@pytest.mark.parametrize("m", [2, 4])
@pytest.mark.parametrize("q", [3, 5])
def test_counts_match_enumeration(m, q):
    F = field_for_order(q)
    for k in range(m + 1):
        subs = enumerate_subspaces(m, k, F)
        assert len(subs) == gr_count(k, m, q) == len(set(subs))
        if k <= m // 2:
            assert len(enumerate_isotropic(m // 2, k, F)) == ig_count(k, m, q)


@pytest.mark.parametrize("p,total,homog", [(3, 19, 11), (5, 39, 15), (7, 67, 19)])
def test_enumeration_h1(p, total, homog):
    g = HeisenbergGroup(1, p)
    recs = enumerate_subgroups(g)
    assert len(recs) == total == subgroup_count_formula(1, p)
    assert sum(r.homogeneous for r in recs) == homog == homogeneous_count_formula(1, p)
    assert all(r.kind in ("product", "graph") for r in recs)
    assert all(r.homogeneous == matches_homogeneous_shape(r) for r in recs)
    closed = enumerate_subgroups(g, method="closure")
    assert [r.elements for r in closed] == [r.elements for r in recs]


def test_enumeration_h2_f3():
    g = HeisenbergGroup(2, 3)
    recs = enumerate_subgroups(g)
    assert len(recs) == 693 == subgroup_count_formula(2, 3)
    assert sum(r.homogeneous for r in recs) == homogeneous_count_formula(2, 3)


@pytest.mark.slow
def test_enumeration_h1_f9():
    # over a non-prime field many subgroups are only F_3-linear
    recs = enumerate_subgroups(HeisenbergGroup(1, 9))
    assert len(recs) == 3307
    assert sum(r.homogeneous for r in recs) == 23 == homogeneous_count_formula(1, 9)


def test_complements():
    g = HeisenbergGroup(1, 5)
    W1 = closure(g, [(0, 1, 0), (0, 0, 1)])
    assert {tuple(p) for p in heis_complement(W1).subset.points()} == {(s, 0, 0) for s in range(5)}
    S = rref([(1, 0)], g.field)
    rep = heis_complement(subspace_to_subgroup(g, S, vertical=False))
    assert rep.is_subgroup and rep.homogeneous
    g2 = HeisenbergGroup(2, 3)
    rep2 = heis_complement(subspace_to_subgroup(g2, rref([(1, 0, 0, 0)], g2.field), vertical=True))
    assert not rep2.is_subgroup


@pytest.mark.parametrize("n,q", [(1, 3), (1, 5), (1, 7), (1, 9), (2, 3), (2, 5)])
def test_orbit_census(n, q):
    c = orbit_census(HeisenbergGroup(n, q))
    assert c.partition_ok and c.sizes_ok
    # identity, two central orbits, and q per line through the origin of F_q^(2n)
    assert c.n_orbits == 3 + q * (q ** (2 * n) - 1) // (q - 1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), max_size=3))
def test_closure_is_subgroup(gens):
    g = HeisenbergGroup(1, 5)
    rec = closure(g, gens)
    assert is_subgroup(g, rec.as_subset())
    assert 125 % rec.order == 0
    assert classify_subgroup(rec).kind in ("product", "graph")
