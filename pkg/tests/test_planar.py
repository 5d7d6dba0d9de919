import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_k3.lattice import UnimodularMap, find_unimodular_equivalence
from toric_k3.planar import (
    DUAL_INDEX,
    REFERENCE_VERTICES,
    classify_planar,
    enumerate_planar_reflexive,
    lattice_neighbours,
    reference_polytope,
    sum_condition,
)
from toric_k3.polytope import IntegralPolytope, PolytopeError
from toric_k3.semistable import marked_vertices


def test_sixteen_classes_and_duality():
    classes = enumerate_planar_reflexive(3)
    assert len(classes) == 16
    for p in classes:
        cls, g = classify_planar(p)
        assert p.transform(g) == reference_polytope(cls.index)
        dcls, _ = classify_planar(p.dual())
        assert dcls.index == DUAL_INDEX[cls.index]
        # 12 = boundary points of a reflexive polygon plus those of its dual
        assert len(p.boundary_points) + len(p.dual().boundary_points) == 12
    assert all(DUAL_INDEX[DUAL_INDEX[i]] == i for i in DUAL_INDEX)
    assert sorted(i for i in DUAL_INDEX if DUAL_INDEX[i] == i) == [12, 13, 14, 15]


def test_reference_polygons_are_pairwise_inequivalent():
    refs = [reference_polytope(i) for i in sorted(REFERENCE_VERTICES)]
    for i, p in enumerate(refs):
        assert p.is_reflexive()
        for q in refs[i + 1:]:
            assert find_unimodular_equivalence(p, q) is None


def test_enumeration_is_stable_in_the_box():
    # growing the box finds no new classes
    assert len(enumerate_planar_reflexive(4)) == 16


def _random_reflexive_polygon(seed):
    rng = random.Random(seed)
    while True:
        pts = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(rng.randint(3, 7))]
        try:
            p = IntegralPolytope(pts)
        except PolytopeError:
            continue
        if p.is_reflexive():
            return p


@given(st.integers(0, 10**6), st.sampled_from([((1, 1), (0, 1)), ((2, 1), (1, 1)), ((0, 1), (-1, 0)), ((1, 0), (3, 1))]))
@settings(max_examples=60, deadline=None)
def test_classification_is_invariant(seed, mat):
    p = _random_reflexive_polygon(seed)
    cls, _ = classify_planar(p)
    assert classify_planar(p.transform(UnimodularMap(mat)))[0] == cls


def test_classify_rejects():
    with pytest.raises(PolytopeError):
        classify_planar(IntegralPolytope([(1, 0), (0, 1), (-2, -2)]))


def test_neighbours_and_sum_condition():
    p = reference_polytope(15)
    assert set(lattice_neighbours(p, (-1, -1))) == {(-1, 0), (0, -1)}
    assert sum_condition(p, (-1, -1))
    assert not sum_condition(p, (2, -1))
    # marked vertices of all sixteen reference polygons
    assert marked_vertices(15) == [(-1, -1)]
    assert marked_vertices(1) == []
    assert marked_vertices(6) == list(reference_polytope(6).vertices)
    # vertices where two lattice-length-one edges meet never qualify
    for i in REFERENCE_VERTICES:
        for v in marked_vertices(i):
            n1, n2 = lattice_neighbours(reference_polytope(i), v)
            assert tuple(a + b for a, b in zip(n1, n2)) == v
