"""The 16 reflexive polygons: reference coordinates, duality, classification.

Reference vertices are listed in Cox-variable order (x, y, z, w_1, w_2, w_3),
chosen so that the anticanonical monomials over each class reproduce the
standard elliptic-curve tables of toric del Pezzo surfaces.  Classes 1, 6 and
15 carry their customary coordinates; every other class uses the orbit
member minimising (sum of squared vertex norms, lexicographic order) found
by ``enumerate_planar_reflexive(3)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .lattice import UnimodularMap, Vector, find_unimodular_equivalence
from .polytope import IntegralPolytope, PolytopeError

VARIABLE_NAMES = ("x", "y", "z", "w1", "w2", "w3")

REFERENCE_VERTICES: dict[int, tuple[Vector, ...]] = {
    1: ((1, 0), (0, 1), (-1, -1)),
    2: ((-1, 0), (0, -1), (1, 0), (0, 1)),
    3: ((-1, -1), (-1, 0), (0, 1), (1, 0)),
    4: ((-1, -1), (-1, 1), (1, 0)),
    5: ((0, 1), (-1, 0), (-1, -1), (0, -1), (1, 0)),
    6: ((2, -1), (-1, 2), (-1, -1)),
    7: ((-1, -1), (-1, 1), (1, 1), (1, -1)),
    8: ((-2, -1), (1, -1), (1, 1), (0, 1)),
    9: ((-2, -1), (2, -1), (0, 1)),
    10: ((-1, 0), (-1, -1), (1, -1), (1, 1), (0, 1)),
    11: ((1, -1), (-1, -1), (-1, 0), (0, 1)),
    12: ((1, 1), (1, -1), (-1, -1), (-1, 0)),
    13: ((-1, 0), (-1, -1), (1, -1), (1, 0), (0, 1)),
    14: ((-1, -1), (-1, 0), (0, 1), (1, 1), (1, 0), (0, -1)),
    15: ((2, -1), (-1, 1), (-1, -1)),
    16: ((1, 0), (1, -1), (-2, -1), (0, 1)),
}

DUAL_INDEX = {
    1: 6, 6: 1, 2: 7, 7: 2, 3: 8, 8: 3, 4: 9, 9: 4, 5: 10, 10: 5,
    11: 16, 16: 11, 12: 12, 13: 13, 14: 14, 15: 15,
}


@dataclass(frozen=True)
class PlanarClass:
    index: int

    @property
    def dual_index(self) -> int:
        return DUAL_INDEX[self.index]

    @property
    def reference_vertices(self) -> tuple[Vector, ...]:
        return REFERENCE_VERTICES[self.index]

    @property
    def variable_names(self) -> tuple[str, ...]:
        return VARIABLE_NAMES[: len(self.reference_vertices)]

    def polytope(self) -> IntegralPolytope:
        return reference_polytope(self.index)

    def name_of(self, reference_vertex: Vector) -> str:
        return self.variable_names[self.reference_vertices.index(tuple(reference_vertex))]


@lru_cache(maxsize=None)
def reference_polytope(index: int) -> IntegralPolytope:
    return IntegralPolytope(REFERENCE_VERTICES[index])


def _invariants(p: IntegralPolytope) -> tuple[int, int]:
    return len(p.vertices), len(p.boundary_points)


def classify_planar(p: IntegralPolytope) -> tuple[PlanarClass, UnimodularMap]:
    """Class of a reflexive polygon and a map g with g(p) = reference polygon."""
    if p.dimension != 2:
        raise PolytopeError("classify_planar expects a polygon")
    if not p.is_reflexive():
        raise PolytopeError("polygon is not reflexive")
    return _classify_vertices(p.vertices)


@lru_cache(maxsize=4096)
def _classify_vertices(vertices: tuple[Vector, ...]) -> tuple[PlanarClass, UnimodularMap]:
    # fibre polygons repeat heavily across a scan
    p = IntegralPolytope(vertices)
    inv = _invariants(p)
    for index in sorted(REFERENCE_VERTICES):
        ref = reference_polytope(index)
        if _invariants(ref) != inv:
            continue
        g = find_unimodular_equivalence(p, ref)
        if g is not None:
            return PlanarClass(index), g
    raise AssertionError(f"reflexive polygon {p.vertices} matched no reference class")


def _primitive_points(bound: int) -> list[Vector]:
    pts = [
        (a, b)
        for a in range(-bound, bound + 1)
        for b in range(-bound, bound + 1)
        if math.gcd(a, b) == 1
    ]
    pts.sort(key=lambda p: math.atan2(p[1], p[0]))
    return pts


def reflexive_polygons_in_box(bound: int) -> list[IntegralPolytope]:
    """Every reflexive polygon with vertices in [-bound, bound]^2 (no dedup).

    Vertices of a reflexive polygon are primitive and each edge sits at
    lattice distance one from the origin: det(a, b) equals the lattice
    length of [a, b].  Walking counter-clockwise with that constraint and
    strict convexity enumerates all of them.
    """
    pts = _primitive_points(bound)

    def edge_ok(a, b):
        d = a[0] * b[1] - a[1] * b[0]
        return d > 0 and d == math.gcd(b[0] - a[0], b[1] - a[1])

    def turns_left(a, b, c):
        return (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]) > 0

    found = []

    def walk(path, nxt):
        last = path[-1]
        if (
            len(path) >= 3
            and edge_ok(last, path[0])
            and turns_left(path[-2], last, path[0])
            and turns_left(last, path[0], path[1])
        ):
            found.append(tuple(path))
        for j in range(nxt, len(pts)):
            q = pts[j]
            if edge_ok(last, q) and (len(path) < 2 or turns_left(path[-2], last, q)):
                walk(path + [q], j + 1)

    for i, p in enumerate(pts):
        walk([p], i + 1)
    return [IntegralPolytope(vs) for vs in found]


def enumerate_planar_reflexive(bound: int) -> list[IntegralPolytope]:
    """Reflexive polygons in the box, one per GL(2, Z) class.

    Each class is represented by its member minimising
    (sum of squared vertex norms, vertex tuple).
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    polys = reflexive_polygons_in_box(bound)
    key = lambda p: (sum(c * c for v in p.vertices for c in v), p.vertices)  # noqa: E731
    polys.sort(key=key)
    classes: list[IntegralPolytope] = []
    for p in polys:
        inv = _invariants(p)
        if not any(_invariants(q) == inv and find_unimodular_equivalence(p, q) for q in classes):
            classes.append(p)
    return classes


def sum_condition(fiber: IntegralPolytope, vertex: Vector) -> bool:
    """True iff the vertex equals the sum of its two lattice neighbours."""
    n1, n2 = lattice_neighbours(fiber, vertex)
    return tuple(a + b for a, b in zip(n1, n2)) == tuple(vertex)


def lattice_neighbours(poly: IntegralPolytope, vertex: Vector) -> tuple[Vector, Vector]:
    """First lattice points after ``vertex`` along its two polygon edges."""
    vertex = tuple(vertex)
    out = []
    for a, b in poly.vertex_edges(vertex):
        other = b if a == vertex else a
        d = tuple(o - v for o, v in zip(other, vertex))
        g = math.gcd(*d)
        out.append(tuple(v + x // g for v, x in zip(vertex, d)))
    if len(out) != 2:
        raise PolytopeError(f"{vertex} does not have two edges")
    return out[0], out[1]
