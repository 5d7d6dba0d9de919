"""Semistable polytopes and Candelas-Font Weierstrass models."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .cox import (
    FiberedEquation,
    HypersurfaceEquation,
    NoStandardForm,
    WeierstrassDegrees,
    anticanonical_monomials,
    group_by_fiber,
    weierstrass_completion,
)
from .fibration import (
    FibrationData,
    condition1,
    condition2,
    fibration_for_normal,
    has_section_at_infinity,
    sections_at_infinity,
    unit_neighbours_on_edge,
)
from .lattice import Vector, content, find_unimodular_equivalence, spans_lattice, sub
from .planar import classify_planar, sum_condition
from .polytope import IntegralPolytope


class SemistableError(ValueError):
    pass


@dataclass(frozen=True)
class SemistablePolytope:
    fiber_class: int
    v_z: Vector
    v_s: Vector
    v_t: Vector
    fiber_vertices: tuple[Vector, ...]
    hull: IntegralPolytope
    fiber_points: tuple[Vector, ...] = ()

    @property
    def spans(self) -> bool:
        """Do L and the fibre lattice points generate the lattice (not just R^3)?"""
        return spans_lattice(list(self.fiber_points or self.fiber_vertices) + [self.v_s, self.v_t])

    @property
    def L(self) -> tuple[Vector, Vector]:
        return self.v_s, self.v_t


def _as_polygon(fiber) -> IntegralPolytope:
    return fiber if isinstance(fiber, IntegralPolytope) else IntegralPolytope(fiber)


def _embed(v: Sequence[int]) -> Vector:
    return (v[0], v[1], 0)


def semistable_hull(fiber, v_z: Sequence[int], v_s: Sequence[int]) -> SemistablePolytope | None:
    """Hull of the fibre (in z3 = 0) and L = [v_s, 2 v_z - v_s], or None if not semistable."""
    poly = _as_polygon(fiber)
    vz = _embed(v_z)
    v_s = tuple(v_s)
    if v_s[2] == 0:
        raise SemistableError("v_s must leave the fibre plane")
    v_t = tuple(2 * a - b for a, b in zip(vz, v_s))
    if content(sub(v_s, vz)) != 1:
        return None
    verts = [_embed(v) for v in poly.vertices]
    hull = IntegralPolytope(verts + [v_s, v_t])
    if not all(c > 0 for _, c in hull.facets) or not hull.is_reflexive():
        return None
    cls, _ = classify_planar(poly)
    pts = tuple(_embed(p) for p in poly.lattice_points)
    return SemistablePolytope(cls.index, vz, v_s, v_t, tuple(sorted(verts)), hull, pts)


def build_semistable(fiber, v_z: Sequence[int]) -> SemistablePolytope:
    """The semistable polytope with vertical L over v_z.

    Requires the fibre and v_z +- e3 to generate the lattice; the hull is
    then reflexive.
    """
    poly = _as_polygon(fiber)
    if tuple(v_z) not in poly.vertices:
        raise SemistableError(f"{tuple(v_z)} is not a fibre vertex")
    vz = _embed(v_z)
    v_s = (vz[0], vz[1], 1)
    v_t = (vz[0], vz[1], -1)
    if not spans_lattice([_embed(p) for p in poly.lattice_points] + [v_s, v_t]):
        raise SemistableError("L and the fibre do not generate the lattice")
    ss = semistable_hull(poly, v_z, v_s)
    if ss is None:
        raise AssertionError("spanning configuration gave a non-reflexive hull")
    return ss


def check_sum_condition(fiber, v_z: Sequence[int]) -> bool:
    return sum_condition(_as_polygon(fiber), tuple(v_z))


def _plane_automorphism(v_z: Vector):
    def accept(g) -> bool:
        m = g.matrix
        return m[2][0] == 0 and m[2][1] == 0 and g(v_z) == v_z

    return accept


def enumerate_semistable(fiber, v_z: Sequence[int], bound: int = 6) -> list[SemistablePolytope]:
    """All semistable polytopes over (fibre, v_z) with v_s in [-bound, bound]^3.

    v_s is taken above the plane (v_t is then below); results are merged
    under lattice automorphisms that preserve the fibre plane and fix v_z.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    poly = _as_polygon(fiber)
    vz = _embed(v_z)
    found: list[SemistablePolytope] = []
    rng = range(-bound, bound + 1)
    candidates = sorted(
        itertools.product(rng, rng, range(1, bound + 1)),
        key=lambda v: (v[2], sum(map(abs, sub(v, vz))), v),
    )
    for a, b, c in candidates:
        ss = semistable_hull(poly, v_z, (a, b, c))
        if ss is None:
            continue
        accept = _plane_automorphism(vz)
        if any(
            len(o.hull.vertices) == len(ss.hull.vertices)
            and find_unimodular_equivalence(ss.hull, o.hull, accept=accept) is not None
            for o in found
        ):
            continue
        found.append(ss)
    return found


# Candelas-Font models --------------------------------------------------------


@dataclass
class WeierstrassModelData:
    semistable: SemistablePolytope
    model_equation: HypersurfaceEquation
    surviving: frozenset[Vector]
    fibered: FiberedEquation
    fibration: FibrationData

    def surviving_count(self) -> int:
        return len(self.surviving)

    @property
    def v_z(self) -> Vector:
        return self.semistable.v_z

    def weierstrass_degrees(self) -> WeierstrassDegrees | NoStandardForm:
        if self.fibration.fiber_variable(self.v_z) != "z":
            return NoStandardForm("v_z is not the flex vertex z of the reference fibre", self.fibered)
        return weierstrass_completion(self.fibered)


def semistable_in_parent(f: FibrationData, v_z: Sequence[int]) -> SemistablePolytope | None:
    """Semistable polytope spanned by the fibre and the unit neighbours of v_z on its edge."""
    v_z = tuple(v_z)
    v_s, v_t = unit_neighbours_on_edge(f, v_z)
    verts = list(f.fiber_vertices) + [v_s, v_t]
    hull = IntegralPolytope(verts)
    if not all(c > 0 for _, c in hull.facets) or not hull.is_reflexive():
        return None
    return SemistablePolytope(
        f.fiber_class.index, v_z, v_s, v_t, tuple(f.fiber_vertices), hull, tuple(f.fiber_points)
    )


def candelas_font_model(nabla: IntegralPolytope, f: FibrationData, v_z: Sequence[int]) -> WeierstrassModelData:
    """Model equation over the semistable polytope contained in nabla.

    The model lives on the semistable polytope's own rays (fibre vertices,
    v_s, v_t); monomials whose source point lies in the dual of nabla are
    the ones switched on in nabla's family.
    """
    v_z = tuple(v_z)
    if not has_section_at_infinity(f, v_z):
        raise SemistableError(f"no section at infinity at {v_z}")
    ss = semistable_in_parent(f, v_z)
    if ss is None:
        raise SemistableError("the fibre and L do not span a semistable polytope")
    if not nabla.contains_polytope(ss.hull):
        raise SemistableError("the semistable polytope is not contained in the polytope")
    delta = nabla.dual()
    delta_s = ss.hull.dual()
    if not delta_s.contains_polytope(delta):
        raise AssertionError("dual inclusion failed although the primal one holds")
    names = f.fiber_vertex_names()
    rays = list(f.fiber_vertices) + [ss.v_s, ss.v_t]
    eq = anticanonical_monomials(rays, delta_s, [names[v] for v in f.fiber_vertices] + ["s", "t"])
    sub_f = fibration_for_normal(ss.hull, f.normal)
    fe = group_by_fiber(eq, sub_f)
    surviving = frozenset(m.source for m in eq.monomials if delta.contains(m.source))
    return WeierstrassModelData(ss, eq, surviving, fe, sub_f)


def candelas_characterization(nabla: IntegralPolytope, f: FibrationData) -> bool:
    """Contains a semistable polytope at a section at infinity and projects onto the fibre."""
    if not condition1(f)[0] or not condition2(f):
        return False
    for v_z, _ in sections_at_infinity(f):
        ss = semistable_in_parent(f, v_z)
        if ss is not None and nabla.contains_polytope(ss.hull):
            return True
    return False


def marked_vertices(index: int) -> list[Vector]:
    """Vertices of a reference polygon satisfying the sum condition."""
    from .planar import reference_polytope

    poly = reference_polytope(index)
    return [v for v in poly.vertices if sum_condition(poly, v)]
