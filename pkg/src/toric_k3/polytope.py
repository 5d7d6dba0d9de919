"""Integral polytopes in dimension 2 and 3 with exact arithmetic.

Facets are stored as (inner normal u, offset c) meaning <u, v> >= -c on the
polytope, with u primitive.  For a reflexive polytope every offset is 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .lattice import (
    LatticeError,
    UnimodularMap,
    Vector,
    content,
    cross,
    det,
    dot,
    primitive,
    rank,
    solve_rational,
    sub,
)


class PolytopeError(ValueError):
    pass


def _hyperplane_normal(points: Sequence[Vector]) -> Vector:
    """Integer normal of the affine hyperplane through n points in Z^n."""
    base = points[0]
    diffs = [sub(p, base) for p in points[1:]]
    n = len(base)
    normal = []
    for j in range(n):
        minor = [d[:j] + d[j + 1:] for d in diffs]
        normal.append((-1) ** j * det(minor))
    return tuple(normal)


def affine_rank(points: Sequence[Vector]) -> int:
    """Dimension of the affine hull."""
    pts = list(points)
    if not pts:
        return -1
    return rank([sub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0


@dataclass(frozen=True)
class Face:
    vertices: tuple[Vector, ...]
    facets: frozenset[int]
    dim: int


class IntegralPolytope:
    """Full-dimensional lattice polytope given as the hull of integer points.

    Vertices are sorted lexicographically; caches are filled on first use and
    never mutated afterwards.
    """

    def __init__(self, points: Iterable[Sequence[int]], lattice_role: str = "N"):
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise PolytopeError("empty point set")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise PolytopeError("points of mixed dimension")
        if affine_rank(pts) != n:
            raise PolytopeError(f"points are not full-dimensional in Z^{n}")
        self.dimension = n
        self.lattice_role = lattice_role
        self.facets = self._compute_facets(pts)
        self.vertices = self._extract_vertices(pts)

    # construction ---------------------------------------------------------

    def _compute_facets(self, pts: list[Vector]) -> tuple[tuple[Vector, int], ...]:
        n = self.dimension
        found: dict[Vector, int] = {}
        for combo in itertools.combinations(pts, n):
            normal = _hyperplane_normal(combo)
            if not any(normal):
                continue
            normal = primitive(normal)
            level = dot(normal, combo[0])
            if found.get(normal) == -level or found.get(tuple(-x for x in normal)) == level:
                continue
            vals = [dot(normal, p) - level for p in pts]
            if all(x >= 0 for x in vals):
                found[normal] = -level
            elif all(x <= 0 for x in vals):
                found[tuple(-x for x in normal)] = level
        return tuple(sorted(found.items()))

    def _extract_vertices(self, pts: list[Vector]) -> tuple[Vector, ...]:
        verts = []
        for p in pts:
            tight = [u for u, c in self.facets if dot(u, p) == -c]
            if len(tight) >= self.dimension and rank(tight) == self.dimension:
                verts.append(p)
        return tuple(sorted(verts))

    @classmethod
    def from_inequalities(cls, facets: Iterable[tuple[Sequence[int], int]], lattice_role: str = "N"):
        """Polytope {v : <u, v> >= -c}; must have integral vertices."""
        facets = [(tuple(u), c) for u, c in facets]
        n = len(facets[0][0])
        verts = set()
        for combo in itertools.combinations(facets, n):
            normals = [u for u, _ in combo]
            if det(normals) == 0:
                continue
            sol = solve_rational(normals, [-c for _, c in combo])
            if all(dot(u, sol) >= -c for u, c in facets):
                if any(x.denominator != 1 for x in sol):
                    raise PolytopeError(f"non-integral vertex {sol}")
                verts.add(tuple(int(x) for x in sol))
        return cls(verts, lattice_role)

    # basic predicates -------------------------------------------------------

    def __repr__(self) -> str:
        return f"IntegralPolytope(dim={self.dimension}, vertices={list(self.vertices)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegralPolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def contains(self, p: Sequence[int]) -> bool:
        return all(dot(u, p) >= -c for u, c in self.facets)

    def contains_polytope(self, other: "IntegralPolytope") -> bool:
        return all(self.contains(v) for v in other.vertices)

    def tight_facets(self, p: Sequence[int]) -> frozenset[int]:
        return frozenset(i for i, (u, c) in enumerate(self.facets) if dot(u, p) == -c)

    def is_interior(self, p: Sequence[int]) -> bool:
        return not self.tight_facets(p) and self.contains(p)

    @cached_property
    def lattice_points(self) -> tuple[Vector, ...]:
        """Sorted lattice points; the last coordinate's range is solved per column."""
        n = self.dimension
        ranges = [
            range(min(v[i] for v in self.vertices), max(v[i] for v in self.vertices) + 1)
            for i in range(n - 1)
        ]
        out = []
        for head in itertools.product(*ranges):
            lo, hi = -math.inf, math.inf
            for u, c in self.facets:
                rest = -c - sum(a * b for a, b in zip(u, head))
                w = u[-1]
                if w > 0:
                    lo = max(lo, -(-rest // w))
                elif w < 0:
                    hi = min(hi, rest // w)
                elif rest > 0:
                    break
            else:
                if lo <= hi:
                    out.extend(head + (z,) for z in range(lo, hi + 1))
        return tuple(out)

    @cached_property
    def interior_points(self) -> tuple[Vector, ...]:
        return tuple(p for p in self.lattice_points if not self.tight_facets(p))

    @cached_property
    def boundary_points(self) -> tuple[Vector, ...]:
        return tuple(p for p in self.lattice_points if self.tight_facets(p))

    def is_reflexive(self) -> bool:
        origin = (0,) * self.dimension
        if not all(c > 0 for _, c in self.facets):
            return False
        if not all(c == 1 for _, c in self.facets):
            return False
        if self.interior_points != (origin,):
            raise AssertionError("facet offsets are 1 but the origin is not the unique interior point")
        return True

    def dual(self) -> "IntegralPolytope":
        if not self.is_reflexive():
            raise PolytopeError("only reflexive polytopes are dualised")
        role = "M" if self.lattice_role == "N" else "N"
        return IntegralPolytope([u for u, _ in self.facets], role)

    def polar_is_integral(self) -> bool:
        """Independent reflexivity route: solve the polar's vertices over Q."""
        if any(c <= 0 for _, c in self.facets):
            return False
        rows = [(tuple(v), 1) for v in self.vertices]
        n = self.dimension
        for combo in itertools.combinations(rows, n):
            a = [v for v, _ in combo]
            if det(a) == 0:
                continue
            sol = solve_rational(a, [-1] * n)
            if all(dot(v, sol) >= -1 for v, _ in rows) and any(x.denominator != 1 for x in sol):
                return False
        return True

    def transform(self, g: UnimodularMap) -> "IntegralPolytope":
        return IntegralPolytope(g.apply_all(self.vertices), self.lattice_role)

    # faces ----------------------------------------------------------------

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        """All proper nonempty faces plus the polytope itself."""
        facet_sets = [frozenset(v for v in self.vertices if dot(u, v) == -c) for u, c in self.facets]
        vsets = set(facet_sets)
        frontier = set(facet_sets)
        while frontier:
            new = set()
            for a in frontier:
                for b in facet_sets:
                    inter = a & b
                    if inter and inter not in vsets:
                        new.add(inter)
            vsets |= new
            frontier = new
        vsets.add(frozenset(self.vertices))
        faces = []
        for vs in vsets:
            verts = tuple(sorted(vs))
            fac = frozenset(i for i, s in enumerate(facet_sets) if vs <= s)
            faces.append(Face(verts, fac, affine_rank(verts)))
        faces.sort(key=lambda f: (f.dim, f.vertices))
        return tuple(faces)

    def faces_of_dim(self, k: int) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if f.dim == k)

    @cached_property
    def edges(self) -> tuple[tuple[Vector, Vector], ...]:
        return tuple((f.vertices[0], f.vertices[1]) for f in self.faces_of_dim(1))

    def is_edge(self, a: Sequence[int], b: Sequence[int]) -> bool:
        a, b = tuple(a), tuple(b)
        return (min(a, b), max(a, b)) in set(self.edges)

    def lattice_length(self, a: Sequence[int], b: Sequence[int]) -> int:
        if not self.is_edge(a, b):
            raise PolytopeError(f"{tuple(a)}-{tuple(b)} is not an edge")
        return content(sub(b, a))

    def minimal_face(self, p: Sequence[int]) -> Face:
        """The face containing p in its relative interior."""
        if not self.contains(p):
            raise PolytopeError(f"{tuple(p)} is outside the polytope")
        tight = self.tight_facets(p)
        return next(f for f in self.faces if f.facets == tight)

    def edge_through(self, p: Sequence[int]) -> tuple[Vector, Vector] | None:
        """The edge containing p in its relative interior, if any."""
        f = self.minimal_face(p)
        if f.dim == 1 and tuple(p) not in f.vertices:
            return f.vertices
        return None

    def vertex_edges(self, vertex: Sequence[int]) -> list[tuple[Vector, Vector]]:
        vertex = tuple(vertex)
        if vertex not in self.vertices:
            raise PolytopeError(f"{vertex} is not a vertex")
        return [e for e in self.edges if vertex in e]

    def is_simple_at(self, vertex: Sequence[int]) -> bool:
        vertex = tuple(vertex)
        if vertex not in self.vertices:
            raise PolytopeError(f"{vertex} is not a vertex")
        return len(self.tight_facets(vertex)) == self.dimension

    def is_simple(self) -> bool:
        return all(self.is_simple_at(v) for v in self.vertices)

    def dual_face(self, face: Face) -> tuple[Vector, ...]:
        """Vertices of the dual face in the polar polytope (reflexive only)."""
        return tuple(sorted(self.facets[i][0] for i in face.facets))


def canonicalize(points: Iterable[Sequence[int]], lattice_role: str = "N") -> IntegralPolytope:
    return IntegralPolytope(points, lattice_role)


def is_reflexive(p: IntegralPolytope) -> bool:
    return p.is_reflexive()


def dual(p: IntegralPolytope) -> IntegralPolytope:
    return p.dual()


def lattice_length(a: Sequence[int], b: Sequence[int], polytope: IntegralPolytope | None = None) -> int:
    """Lattice length of the segment [a, b]; checks edge-ness when given a polytope."""
    if polytope is not None:
        return polytope.lattice_length(a, b)
    if tuple(a) == tuple(b):
        raise LatticeError("degenerate segment")
    return content(sub(b, a))


def segment_points(a: Sequence[int], b: Sequence[int]) -> list[Vector]:
    """All lattice points on [a, b], from a to b."""
    d = sub(b, a)
    g = content(d)
    step = tuple(x // g for x in d)
    return [tuple(x + k * s for x, s in zip(a, step)) for k in range(g + 1)]


def normalized_area(tri: Sequence[Sequence[int]], normal: Sequence[int]) -> int:
    """Normalised area of a lattice triangle lying in a plane with primitive normal."""
    a, b, c = tri
    cr = cross(sub(b, a), sub(c, a))
    # the cross product is a multiple of the primitive normal; the factor is the area
    k = next(x // y for x, y in zip(cr, normal) if y)
    return abs(k)
