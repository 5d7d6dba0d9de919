"""Toric elliptic fibrations of a 3D reflexive polytope.

A fibration is a primitive m_phi in M whose plane <m_phi, v> = 0 cuts the
polytope in a reflexive polygon.  Points with <m_phi, v> > 0 form the top,
those with < 0 the bottom.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .cox import HypersurfaceEquation
from .lattice import (
    UnimodularMap,
    Vector,
    cross,
    dot,
    matrix_with_last_row,
    primitive,
    smith_normal_form,
    sub,
)
from .planar import PlanarClass, classify_planar
from .polytope import IntegralPolytope, PolytopeError


class FibrationError(ValueError):
    pass


def _shear(a: int, b: int) -> UnimodularMap:
    return UnimodularMap(((1, 0, -a), (0, 1, -b), (0, 0, 1)))


@dataclass
class FibrationData:
    parent: IntegralPolytope
    normal: Vector
    basis: UnimodularMap
    fiber: IntegralPolytope
    fiber_class: PlanarClass
    class_map: UnimodularMap
    top: tuple[Vector, ...]
    bottom: tuple[Vector, ...]
    fiber_points: tuple[Vector, ...]
    fiber_vertices: tuple[Vector, ...]
    notes: dict = field(default_factory=dict)

    def height(self, v: Sequence[int]) -> int:
        return dot(self.normal, v)

    def to_fiber(self, v: Sequence[int]) -> Vector:
        w = self.basis(v)
        if w[2] != 0:
            raise FibrationError(f"{tuple(v)} is not in the fibre plane")
        return w[:2]

    def from_fiber(self, w: Sequence[int]) -> Vector:
        return self.basis.inverse()((w[0], w[1], 0))

    @cached_property
    def frame(self) -> UnimodularMap:
        """Basis in which the fibre is the reference polygon times {0}."""
        c = self.class_map.matrix
        block = ((c[0][0], c[0][1], 0), (c[1][0], c[1][1], 0), (0, 0, 1))
        return UnimodularMap(block).compose(self.basis)

    def fiber_variable(self, v: Sequence[int]) -> str:
        """Cox name (x, y, z, w1..) of a fibre vertex, from its reference image."""
        ref = self.class_map(self.to_fiber(v))
        return self.fiber_class.name_of(ref)

    def fiber_vertex_names(self) -> dict[Vector, str]:
        return {v: self.fiber_variable(v) for v in self.fiber_vertices}

    @property
    def fiber_normal(self) -> Vector:
        return self.normal

    @property
    def adapted_basis(self) -> UnimodularMap:
        return self.basis

    def flags(self) -> tuple[bool, bool, bool]:
        c1 = condition1(self)[0]
        return (c1, c1 and condition2(self), bool(condition3(self)))

    @cached_property
    def condition_flags(self) -> tuple[bool, bool, bool]:
        """(c1, c2, c3); c2 is reported False when c1 fails."""
        return self.flags()

    @property
    def sections_at_infinity(self) -> list[tuple[Vector, tuple[Vector, Vector]]]:
        return sections_at_infinity(self)


def _plane_slice_vertices(p: IntegralPolytope, m: Vector) -> list[tuple[Fraction, ...]]:
    """Vertices of p cut by <m, v> = 0 (rational in general)."""
    pts = set()
    for v in p.vertices:
        if dot(m, v) == 0:
            pts.add(tuple(Fraction(x) for x in v))
    for a, b in p.edges:
        ha, hb = dot(m, a), dot(m, b)
        if ha * hb < 0:
            t = Fraction(ha, ha - hb)
            pts.add(tuple(x + t * (y - x) for x, y in zip(a, b)))
    return sorted(pts)


def _orient(m: Vector, points: Sequence[Vector]) -> Vector:
    """Sign of m making the lexicographically larger half the top."""
    up = sorted((p for p in points if dot(m, p) > 0), reverse=True)
    down = sorted((p for p in points if dot(m, p) < 0), reverse=True)
    return m if up >= down else tuple(-x for x in m)


def fibration_for_normal(nabla: IntegralPolytope, m: Sequence[int]) -> FibrationData | None:
    """Fibration data for the plane m^perp, or None if the slice is not reflexive."""
    m = primitive(m)
    m = _orient(m, nabla.lattice_points)
    slice_pts = _plane_slice_vertices(nabla, m)
    if any(x.denominator != 1 for p in slice_pts for x in p):
        return None
    slice_pts = [tuple(int(x) for x in p) for p in slice_pts]
    basis = UnimodularMap(matrix_with_last_row(m))
    coords = [basis(p)[:2] for p in slice_pts]
    try:
        fiber = IntegralPolytope(coords)
    except PolytopeError:
        return None
    if not fiber.is_reflexive():
        return None
    cls, cmap = classify_planar(fiber)
    pts = nabla.lattice_points
    inv = basis.inverse()
    return FibrationData(
        parent=nabla,
        normal=m,
        basis=basis,
        fiber=fiber,
        fiber_class=cls,
        class_map=cmap,
        top=tuple(p for p in pts if dot(m, p) > 0),
        bottom=tuple(p for p in pts if dot(m, p) < 0),
        fiber_points=tuple(p for p in pts if dot(m, p) == 0),
        fiber_vertices=tuple(sorted(inv((w[0], w[1], 0)) for w in fiber.vertices)),
    )


def candidate_normals(nabla: IntegralPolytope) -> list[Vector]:
    """Primitive normals of planes through the origin and two lattice points."""
    pts = [p for p in nabla.lattice_points if any(p)]
    seen = set()
    for p, q in itertools.combinations(pts, 2):
        c = cross(p, q)
        if not any(c):
            continue
        c = primitive(c)
        if c < tuple(-x for x in c):
            c = tuple(-x for x in c)
        seen.add(c)
    return sorted(seen)


def find_fibrations(nabla: IntegralPolytope, fiber_class: int | None = None) -> list[FibrationData]:
    if nabla.dimension != 3 or not nabla.is_reflexive():
        raise FibrationError("find_fibrations needs a 3D reflexive polytope")
    out = []
    for m in candidate_normals(nabla):
        f = fibration_for_normal(nabla, m)
        if f is None:
            continue
        if fiber_class is not None and f.fiber_class.index != fiber_class:
            continue
        out.append(f)
    return out


# Candelas' conditions ------------------------------------------------------


def lattice_summand_basis(generators: Sequence[Sequence[int]]) -> tuple[bool, UnimodularMap | None]:
    """Is the span of ``generators`` a rank-2 direct summand of Z^3?

    On success returns g with g(span) = {z3 = 0}.
    """
    gens = [tuple(g) for g in generators]
    d, _, _ = smith_normal_form(gens)
    nonzero = [d[i][i] for i in range(min(len(d), 3)) if d[i][i]]
    if nonzero != [1, 1]:
        return False, None
    # a rank-2 summand is cut out by the primitive normal of its plane
    normal = next(primitive(c) for p, q in itertools.combinations(gens, 2) if any(c := cross(p, q)))
    return True, UnimodularMap(matrix_with_last_row(normal))


def condition1(f: FibrationData) -> tuple[bool, UnimodularMap | None]:
    """N_phi (spanned by the fibre lattice points) is a summand of N."""
    return lattice_summand_basis(f.fiber_points)


def _shear_range(f: FibrationData) -> list[tuple[int, int]]:
    bound = max(abs(c) for w in f.fiber.vertices for c in w)
    lo_hi = []
    for i in range(2):
        vals = set()
        for v in f.parent.vertices:
            w = f.basis(v)
            if w[2] == 0:
                continue
            for target in range(-bound, bound + 1):
                num = w[i] - target
                if num % w[2] == 0:
                    vals.add(num // w[2])
        lo_hi.append(sorted(vals) or [0])
    pairs = list(itertools.product(*lo_hi))
    pairs.sort(key=lambda ab: (abs(ab[0]) + abs(ab[1]), ab))
    return pairs


def projects_into_fiber(f: FibrationData, basis: UnimodularMap) -> bool:
    """Lattice-image criterion: (z1, z2) of every lattice point lies in the fibre."""
    return all(f.fiber.contains(basis(p)[:2]) for p in f.parent.lattice_points)


def facet_halfspace_criterion(f: FibrationData, basis: UnimodularMap) -> bool:
    """Facet criterion in the given basis.

    An inner normal with positive last coordinate must belong to a facet in
    {z3 <= 0}, a negative one to a facet in {z3 >= 0}.  Facets with a
    vertical normal are unconstrained: one of them may touch the fibre
    plane along an edge from either side.
    """
    dual_basis = basis.dual()
    for u, c in f.parent.facets:
        w3 = dual_basis(u)[2]
        heights = [basis(v)[2] for v in f.parent.vertices if dot(u, v) == -c]
        if w3 > 0 and max(heights) > 0:
            return False
        if w3 < 0 and min(heights) < 0:
            return False
    return True


def projection_basis(f: FibrationData, method: str = "image") -> UnimodularMap | None:
    """First shear of the adapted basis under which condition 2 holds."""
    if method == "image":
        # a shear only moves (z1, z2) by multiples of z3, so project once
        images = {f.basis(p) for p in f.parent.lattice_points}
        fiber = f.fiber
        for a, b in _shear_range(f):
            if all(fiber.contains((w[0] - a * w[2], w[1] - b * w[2])) for w in images):
                return _shear(a, b).compose(f.basis)
        return None
    # under a shear the dual third coordinate becomes a w1 + b w2 + w3
    # while the vertex heights stay fixed
    dual_basis = f.basis.dual()
    facets = []
    for u, c in f.parent.facets:
        heights = [f.basis(v)[2] for v in f.parent.vertices if dot(u, v) == -c]
        facets.append((dual_basis(u), min(heights), max(heights)))
    for a, b in _shear_range(f):
        if all(
            not (w3 > 0 and hi > 0) and not (w3 < 0 and lo < 0)
            for w3, lo, hi in ((a * w[0] + b * w[1] + w[2], lo, hi) for w, lo, hi in facets)
        ):
            return _shear(a, b).compose(f.basis)
    return None


def condition2(f: FibrationData, method: str = "image") -> bool:
    """Lattice points of the polytope project onto those of the fibre.

    The projection is (z1, z2, z3) -> (z1, z2) in some basis adapted to
    N_phi; all such bases differ by shears, which are searched.
    """
    if not condition1(f)[0]:
        raise FibrationError("condition 2 needs condition 1")
    return projection_basis(f, method) is not None


def condition3(f: FibrationData) -> list[tuple[Vector, tuple[Vector, Vector] | None]]:
    """Fibre vertices that are not vertices of the polytope, with their edge."""
    out = []
    for v in f.fiber_vertices:
        if v not in f.parent.vertices:
            out.append((v, f.parent.edge_through(v)))
    return out


def has_section_at_infinity(f: FibrationData, v_z: Sequence[int]) -> bool:
    v_z = tuple(v_z)
    if v_z not in f.fiber_vertices:
        raise FibrationError(f"{v_z} is not a fibre vertex")
    return f.parent.edge_through(v_z) is not None


def sections_at_infinity(f: FibrationData) -> list[tuple[Vector, tuple[Vector, Vector]]]:
    return [(v, e) for v, e in condition3(f) if e is not None]


def unit_neighbours_on_edge(f: FibrationData, v_z: Sequence[int]) -> tuple[Vector, Vector]:
    """Lattice points next to v_z on its edge: (top one, bottom one)."""
    a, b = f.parent.edge_through(tuple(v_z))
    step = primitive(sub(a, b))
    p, q = tuple(x + s for x, s in zip(v_z, step)), tuple(x - s for x, s in zip(v_z, step))
    return (p, q) if f.height(p) > 0 else (q, p)


def base_coordinates(f: FibrationData, rays: Sequence[Sequence[int]]) -> tuple[dict[Vector, int], dict[Vector, int]]:
    """Exponents of z_top and z_bottom over the given rays (zero entries dropped)."""
    top, bottom = {}, {}
    for r in rays:
        h = f.height(r)
        if h > 0:
            top[tuple(r)] = h
        elif h < 0:
            bottom[tuple(r)] = -h
    return top, bottom


def monomial_section_at_infinity(eq: HypersurfaceEquation, f: FibrationData, v_z: Sequence[int]) -> bool:
    """Monomial-level test: after z = 0 some top ray and some bottom ray
    never appear, i.e. the restriction is free of a pair (s, t)."""
    k = eq.rays.index(tuple(v_z))
    survivors = [m for m in eq.monomials if m.exponents[k] == 0]
    if not survivors:
        return False
    absent = [
        i for i in range(len(eq.rays)) if all(m.exponents[i] == 0 for m in survivors)
    ]
    heights = [f.height(eq.rays[i]) for i in absent]
    return any(h > 0 for h in heights) and any(h < 0 for h in heights)


__all__ = [
    "FibrationData",
    "FibrationError",
    "base_coordinates",
    "candidate_normals",
    "condition1",
    "condition2",
    "condition3",
    "facet_halfspace_criterion",
    "find_fibrations",
    "fibration_for_normal",
    "has_section_at_infinity",
    "lattice_summand_basis",
    "monomial_section_at_infinity",
    "projection_basis",
    "projects_into_fiber",
    "sections_at_infinity",
    "unit_neighbours_on_edge",
]
