"""Maximal triangulations and intersection numbers on the K3 hypersurface."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .lattice import UnimodularMap, Vector, content, det, dot, matrix_with_last_row, sub
from .polytope import IntegralPolytope, PolytopeError


class TriangulationError(RuntimeError):
    pass


# planar pulling triangulation ------------------------------------------------


def _orient2(a, b, c) -> int:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _in_cell(cell: tuple, p) -> bool:
    """p in the closed convex polygon ``cell`` (counter-clockwise vertices)."""
    n = len(cell)
    return all(_orient2(cell[i], cell[(i + 1) % n], p) >= 0 for i in range(n))


def _ccw(points: list) -> tuple:
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return tuple(sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx)))


def pulling_triangulation(vertices: Sequence, points: Sequence) -> list[tuple]:
    """Pull every lattice point of a convex polygon, in lexicographic order.

    Pulling p replaces each cell containing p by the cones from p over the
    cell's edges that avoid p.  Once every point is pulled the cells are
    empty lattice triangles.
    """
    cells = [_ccw(list(vertices))]
    for p in sorted(points):
        new = []
        for cell in cells:
            if not _in_cell(cell, p):
                new.append(cell)
                continue
            n = len(cell)
            for i in range(n):
                a, b = cell[i], cell[(i + 1) % n]
                if _orient2(a, b, p) > 0:
                    new.append((p, a, b))
        cells = new
    return cells


# 3D maximal subdivision -------------------------------------------------------


@dataclass
class MaxTriangulation:
    parent: IntegralPolytope
    triangles: dict[int, list[tuple[Vector, Vector, Vector]]]
    star: dict[Vector, list[tuple[int, tuple[Vector, Vector, Vector]]]] = field(default_factory=dict)

    def all_triangles(self):
        for i, tris in sorted(self.triangles.items()):
            for t in tris:
                yield i, t

    def triangles_with_edge(self, a: Vector, b: Vector) -> list[tuple[int, tuple]]:
        return [(i, t) for i, t in self.star.get(tuple(a), []) if tuple(b) in t]

    def joined(self, a: Vector, b: Vector) -> bool:
        return bool(self.triangles_with_edge(a, b))

    @cached_property
    def rays(self) -> tuple[Vector, ...]:
        return tuple(sorted(self.star))


def maximal_subdivision(nabla: IntegralPolytope) -> MaxTriangulation:
    if nabla.dimension != 3 or not nabla.is_reflexive():
        raise PolytopeError("maximal_subdivision needs a 3D reflexive polytope")
    triangles = {}
    star = defaultdict(list)
    for i, (u, c) in enumerate(nabla.facets):
        g = UnimodularMap(matrix_with_last_row(u))
        inv = g.inverse()
        pts = [p for p in nabla.boundary_points if dot(u, p) == -c]
        verts = [p for p in nabla.vertices if dot(u, p) == -c]
        flat = lambda p: g(p)[:2]  # noqa: E731
        level = g(pts[0])[2]
        tris2 = pulling_triangulation([flat(v) for v in verts], [flat(p) for p in pts])
        tris = []
        for t in tris2:
            t3 = tuple(sorted(inv((q[0], q[1], level)) for q in t))
            if abs(det(t3)) != 1:
                raise TriangulationError(f"triangle {t3} is not elementary")
            tris.append(t3)
        tris.sort()
        triangles[i] = tris
        for t in tris:
            for q in t:
                star[q].append((i, t))
    tri = MaxTriangulation(nabla, triangles, dict(star))
    missing = set(nabla.boundary_points) - set(star)
    if missing:
        raise TriangulationError(f"lattice points {sorted(missing)} are not used")
    return tri


def facet_normalized_area(nabla: IntegralPolytope, index: int) -> int:
    """Twice the Euclidean area of a facet in its own lattice (area oracle)."""
    u, c = nabla.facets[index]
    g = UnimodularMap(matrix_with_last_row(u))
    verts = _ccw([g(v)[:2] for v in nabla.vertices if dot(u, v) == -c])
    n = len(verts)
    return sum(verts[i][0] * verts[(i + 1) % n][1] - verts[(i + 1) % n][0] * verts[i][1] for i in range(n))


# divisor restrictions ------------------------------------------------------------


@dataclass(frozen=True)
class DivisorRestriction:
    ray: Vector
    kind: str  # "vanishes", "irreducible" or "splits"
    components: int

    @property
    def is_irreducible(self) -> bool:
        return self.components == 1


def dual_edge_length(nabla: IntegralPolytope, a: Vector, b: Vector) -> int:
    """Lattice length of the dual edge of the edge [a, b] of a reflexive polytope."""
    normals = [u for u, c in nabla.facets if dot(u, a) == -c and dot(u, b) == -c]
    if len(normals) != 2:
        raise PolytopeError(f"{a}-{b} is not an edge")
    return content(sub(normals[0], normals[1]))


def divisor_restriction(v: Sequence[int], nabla: IntegralPolytope) -> DivisorRestriction:
    v = tuple(v)
    if not any(v):
        raise PolytopeError("the origin carries no divisor")
    face = nabla.minimal_face(v)
    if face.dim == 0:
        return DivisorRestriction(v, "irreducible", 1)
    if face.dim == 1:
        return DivisorRestriction(v, "splits", dual_edge_length(nabla, *face.vertices))
    if face.dim == 2:
        return DivisorRestriction(v, "vanishes", 0)
    raise PolytopeError(f"{v} is an interior point")


# intersection numbers -------------------------------------------------------------


def _third(t: tuple, a, b):
    return next(q for q in t if q != a and q != b)


def intersection_number(v1: Sequence[int], v2: Sequence[int], tri: MaxTriangulation) -> int:
    """D_1 . D_2 . V = <m_123, v_4> + 1 over the two triangles at [v1, v2]."""
    v1, v2 = tuple(v1), tuple(v2)
    if v1 == v2:
        raise ValueError("self-intersections are not handled")
    adj = tri.triangles_with_edge(v1, v2)
    if not adj:
        return 0
    if len(adj) != 2:
        raise TriangulationError(f"segment {v1}-{v2} lies in {len(adj)} triangles")
    (i, t), (j, t2) = adj
    m123 = tri.parent.facets[i][0]
    m124 = tri.parent.facets[j][0]
    value = dot(m123, _third(t2, v1, v2)) + 1
    if value != dot(m124, _third(t, v1, v2)) + 1:
        raise TriangulationError("the two adjacent triangles disagree")
    return value


def edge_intersection_number(v1: Sequence[int], v2: Sequence[int], nabla: IntegralPolytope) -> int | None:
    """l'(theta*) + 1 when v1, v2 are lattice neighbours along an edge theta, else None."""
    v1, v2 = tuple(v1), tuple(v2)
    if content(sub(v1, v2)) != 1:
        return None
    for a, b in nabla.edges:
        d = sub(b, a)
        if all(_collinear(sub(v, a), d) and _between(v, a, b) for v in (v1, v2)):
            return dual_edge_length(nabla, a, b)
    return None


def _collinear(x, d) -> bool:
    return not any((x[i] * d[j] - x[j] * d[i]) for i in range(3) for j in range(i + 1, 3))


def _between(v, a, b) -> bool:
    return all(min(p, q) <= x <= max(p, q) for x, p, q in zip(v, a, b))


# fibres and sections --------------------------------------------------------------


def fiber_class_divisor(f) -> dict[Vector, int]:
    """Fibre as sum over top points of <m_phi, v> D_v."""
    return {v: f.height(v) for v in f.top}


def fiber_intersection(v_z: Sequence[int], f, tri: MaxTriangulation) -> int:
    v_z = tuple(v_z)
    return sum(h * intersection_number(v, v_z, tri) for v, h in fiber_class_divisor(f).items())


@dataclass
class SectionReport:
    v_z: Vector
    applicable: bool
    failed: list[str]
    v1: Vector | None = None
    v2: Vector | None = None
    v_s: Vector | None = None
    criterion: bool | None = None

    @property
    def is_section(self) -> bool | None:
        return self.criterion if self.applicable else None


def _unit_steps_off_plane(nabla: IntegralPolytope, v_z: Vector, f) -> list[Vector]:
    """Lattice points at distance one from v_z along edges of the polytope leaving the plane."""
    out = []
    face = nabla.minimal_face(v_z)
    if face.dim == 1:
        edges = [face.vertices]
    elif face.dim == 0:
        edges = nabla.vertex_edges(v_z)
    else:
        return out
    for a, b in edges:
        for end in (a, b):
            if end == v_z:
                continue
            d = sub(end, v_z)
            g = content(d)
            step = tuple(x + y // g for x, y in zip(v_z, d))
            if f.height(step) != 0:
                out.append(step)
    return sorted(set(out))


def fiber_neighbours(f, v_z: Vector) -> tuple[Vector, Vector]:
    from .planar import lattice_neighbours

    w = f.to_fiber(v_z)
    n1, n2 = lattice_neighbours(f.fiber, w)
    return tuple(sorted((f.from_fiber(n1), f.from_fiber(n2))))


def is_simple_at_point(nabla: IntegralPolytope, v: Vector) -> bool:
    """The minimal face of v lies in exactly codim-many facets."""
    face = nabla.minimal_face(v)
    return len(face.facets) == nabla.dimension - face.dim


def is_toric_section(v_z: Sequence[int], f, tri: MaxTriangulation) -> SectionReport:
    """Section criterion v_z = v_1 + v_2, gated by its hypotheses."""
    v_z = tuple(v_z)
    nabla = f.parent
    v1, v2 = fiber_neighbours(f, v_z)
    failed = []
    if not is_simple_at_point(nabla, v_z):
        failed.append("polytope not simple at v_z")
    if not divisor_restriction(v_z, nabla).is_irreducible:
        failed.append("D'_z reducible")
    chosen = None
    steps = _unit_steps_off_plane(nabla, v_z, f)
    for s in steps:
        if _has_triangle(tri, v_z, v1, s) and _has_triangle(tri, v_z, v2, s):
            chosen = s
            break
    if chosen is None:
        failed.append("no v_s with elementary triangles v_z v_1 v_s and v_z v_2 v_s")
    elif not divisor_restriction(chosen, nabla).is_irreducible:
        failed.append("D'_s reducible")
    criterion = tuple(a + b for a, b in zip(v1, v2)) == v_z
    return SectionReport(v_z, not failed, failed, v1, v2, chosen, criterion)


def _has_triangle(tri: MaxTriangulation, a, b, c) -> bool:
    key = tuple(sorted((a, b, c)))
    return any(t == key for _, t in tri.star.get(a, []))


# semistable fibres -----------------------------------------------------------------


def semistable_fiber_count(nabla_s: IntegralPolytope, f) -> Counter:
    """Singular fibres of a semistable polytope's K3 away from the fixed points.

    Each edge e of the fibre that is also an edge of the polytope gives r
    fibres I_{q+1}, with q the number of interior lattice points of e and
    r the lattice length of its dual edge; nodal I_1 fibres fill the Euler
    number up to 24.
    """
    out: Counter = Counter()
    fiber_edges = [(f.from_fiber(a), f.from_fiber(b)) for a, b in f.fiber.edges]
    for a, b in fiber_edges:
        if not nabla_s.is_edge(a, b):
            continue
        q = content(sub(a, b)) - 1
        r = dual_edge_length(nabla_s, a, b)
        out[f"I{q + 1}"] += r
    euler = sum(int(k[1:]) * n for k, n in out.items())
    if euler > 24:
        raise TriangulationError(f"Euler number {euler} exceeds 24")
    out["I1"] += 24 - euler
    return +out
