import pytest

from conftest import example
from toric_k3.cut import (
    CutError,
    cut,
    degeneration_pieces,
    hypersurface_degeneration,
    original_rays,
    rational_elliptic_check,
    rule_rays,
    vertex_is_smooth,
)
from toric_k3.fibration import condition1, condition2, find_fibrations, fibration_for_normal
from toric_k3.lattice import dot
from toric_k3.polytope import IntegralPolytope

CASES = [("prism", (0, 0, 1)), ("bipyramid", (0, 0, 1)), ("plane_bundle", (0, 0, 1)), ("tetra", (0, 0, 1)), ("long_edge", (0, 0, 1))]


def _partition(key, m, simple=False):
    p = example(key)
    f = fibration_for_normal(p, m)
    return p, f, cut(p.dual(), f, require_simple=simple)


@pytest.mark.parametrize("key,m", CASES)
def test_partition_identities(key, m):
    p, f, c = _partition(key, m)
    d, (d1, d2) = c.delta, c.pieces
    assert len(d.lattice_points) == len(d1.lattice_points) + len(d2.lattice_points) - len(c.slice_points)
    assert set(d1.lattice_points) | set(d2.lattice_points) == set(d.lattice_points)
    # the slice is the dual of the fibre
    fiber = IntegralPolytope([v[:2] for v in c.nabla.lattice_points if v[2] == 0])
    assert c.slice == fiber.dual()
    assert all(q.contains(v) for q in (d1, d2) for v in q.vertices)
    assert all(d.contains(v) for v in d1.vertices + d2.vertices)


@pytest.mark.parametrize("key,m", CASES)
def test_rays_and_rational_pieces(key, m):
    p, f, c = _partition(key, m)
    dp = degeneration_pieces(p, c, require_valid=False)
    assert dp.matches_rule
    assert all(dp.rays[j] == rule_rays(c, j) for j in (0, 1))
    assert rational_elliptic_check(0, dp) and rational_elliptic_check(1, dp)
    eq1, eq2, curve = hypersurface_degeneration(p.dual(), c, dp)
    assert len(eq1.monomials) + len(eq2.monomials) - len(curve.monomials) == len(p.dual().lattice_points)
    # apart from the cut ray, every ray is a vertex of the adapted polytope
    for j, extra in ((0, (0, 0, 1)), (1, (0, 0, -1))):
        assert extra in dp.rays[j]
        assert all(r in c.nabla.vertices for r in dp.rays[j] if r != extra)


def test_plane_bundle_cut_is_valid():
    _, _, c = _partition("plane_bundle", (0, 0, 1), simple=True)
    assert c.flags == {"simple_partition": True, "balanced": True, "mildly_singular": True}
    assert c.valid and len(c.new_vertices) == 3


def test_flags_on_the_remaining_examples():
    assert not _partition("prism", (0, 0, 1))[2].flags["simple_partition"]
    f33 = _partition("bipyramid", (0, 0, 1))[2].flags
    assert f33["simple_partition"] and f33["balanced"] and not f33["mildly_singular"]
    f44 = _partition("tetra", (0, 0, 1), simple=True)[2].flags
    assert not f44["simple_partition"] and f44["balanced"] and f44["mildly_singular"]


def test_section_edge_is_split_by_the_cut():
    p, f, c = _partition("tetra", (0, 0, 1))
    dual_g = c.basis.dual()
    v_s, v_t = (-1, -1, 1), (-1, -1, -1)
    dual_edge = [m for m in p.dual().vertices if dot(m, v_s) == -1 and dot(m, v_t) == -1]
    # the edge dual to L lies in the slice; it is shared by both pieces
    assert len(dual_edge) == 2 and all(dual_g(m)[2] == 0 for m in dual_edge)
    assert all(dual_g(m) in q.vertices for q in c.pieces for m in dual_edge)
    dp = degeneration_pieces(p, c, require_valid=False)
    assert v_t in original_rays(dp, 0) and v_s in original_rays(dp, 1)


def test_rejections():
    p = example("long_edge")
    f9 = fibration_for_normal(p, (1, 1, 0))
    assert condition1(f9)[0] and not condition2(f9)
    with pytest.raises(CutError, match="condition 2"):
        cut(p.dual(), f9, require_simple=False)
    q = example("prism")
    with pytest.raises(CutError, match="simple"):
        cut(q.dual(), fibration_for_normal(q, (0, 0, 1)))
    with pytest.raises(CutError, match="dual"):
        cut(p.dual(), fibration_for_normal(q, (0, 0, 1)))
    _, _, c = _partition("prism", (0, 0, 1))
    with pytest.raises(CutError, match="not valid"):
        degeneration_pieces(q, c)


def test_smooth_vertex_check():
    cube = IntegralPolytope([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)])
    assert vertex_is_smooth(cube, (0, 0, 0))
    cone = IntegralPolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])
    assert not vertex_is_smooth(cone, (0, 0, 0))


def test_identity_on_random_polytopes(random_reflexive):
    n = 0
    for p in random_reflexive[:25]:
        for f in find_fibrations(p):
            if not condition2(f):
                continue
            c = cut(p.dual(), f, require_simple=False)
            d = c.delta
            assert len(d.lattice_points) == sum(len(q.lattice_points) for q in c.pieces) - len(c.slice_points)
            dp = degeneration_pieces(p, c, require_valid=False)
            assert all(rational_elliptic_check(j, dp) for j in (0, 1))
            n += 1
    assert n > 0
