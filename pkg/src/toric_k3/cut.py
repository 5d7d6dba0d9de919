"""Cutting the moment polytope along the dual of the fibre.

Work happens in the adapted basis g returned by the projection search:
N coordinates are g(v), so the fibre plane is z3 = 0 and every lattice
point of the polytope projects into the fibre; M coordinates are g*(m).
The cut plane {z3* = 0} then meets Delta exactly in the dual fibre.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cox import HypersurfaceEquation, CoxMonomial, anticanonical_monomials
from .fibration import FibrationData, _plane_slice_vertices, condition1, projection_basis
from .lattice import UnimodularMap, Vector, dot, primitive, rank, spans_lattice, sub
from .polytope import IntegralPolytope, PolytopeError

E3 = (0, 0, 1)


class CutError(ValueError):
    pass


@dataclass
class CutPartition:
    delta: IntegralPolytope
    slice: IntegralPolytope  # 2D, in (z1*, z2*)
    pieces: tuple[IntegralPolytope, IntegralPolytope]
    new_vertices: tuple[Vector, ...]
    basis: UnimodularMap
    nabla: IntegralPolytope
    flags: dict = field(default_factory=dict)

    @property
    def slice_points(self) -> tuple[Vector, ...]:
        return tuple(p for p in self.delta.lattice_points if p[2] == 0)

    @property
    def valid(self) -> bool:
        return all(self.flags.values())


@dataclass
class DegenerationPieces:
    rays: tuple[tuple[Vector, ...], tuple[Vector, ...]]
    double_locus: IntegralPolytope
    fiber: IntegralPolytope
    partition: CutPartition
    hypersurface_parts: tuple | None = None
    matches_rule: bool | None = None


def _half(delta: IntegralPolytope, sign: int) -> IntegralPolytope:
    verts = [v for v in delta.vertices if sign * v[2] >= 0]
    for p in _plane_slice_vertices(delta, E3):
        if any(x.denominator != 1 for x in p):
            raise CutError(f"slice vertex {p} is not a lattice point")
        verts.append(tuple(int(x) for x in p))
    return IntegralPolytope(verts, "M")


def cut(delta: IntegralPolytope, f: FibrationData, require_simple: bool = True) -> CutPartition:
    """Cut delta (the dual of f.parent) along the dual of the fibre.

    ``require_simple=False`` skips the simplicity gate so the partition of a
    non-simple delta can still be inspected; its flags then report the rest.
    """
    if delta != f.parent.dual():
        raise CutError("delta is not the dual of the fibration's polytope")
    if require_simple and not delta.is_simple():
        raise CutError("delta is not simple")
    if not condition1(f)[0]:
        raise CutError("condition 1 fails")
    g = projection_basis(f)
    if g is None:
        raise CutError("condition 2 fails: the polytope does not project onto its fibre")
    dual_g = g.dual()
    d = delta.transform(dual_g)
    nabla = f.parent.transform(g)
    pieces = (_half(d, 1), _half(d, -1))
    slice_pts = [tuple(int(x) for x in p[:2]) for p in _plane_slice_vertices(d, E3)]
    old = set(d.vertices)
    new = tuple(sorted({v for p in pieces for v in p.vertices if v not in old}))
    part = CutPartition(d, IntegralPolytope(slice_pts, "M"), pieces, new, g, nabla)
    part.flags = {
        "simple_partition": check_simple_partition(part),
        "balanced": check_balanced(part),
        "mildly_singular": check_mildly_singular(part),
    }
    return part


def _face_dim_in(delta: IntegralPolytope, verts) -> int:
    tight = None
    for v in verts:
        t = delta.tight_facets(v)
        tight = t if tight is None else tight & t
    if not tight:
        return delta.dimension
    return delta.dimension - rank([delta.facets[i][0] for i in tight])


def check_simple_partition(p: CutPartition) -> bool:
    """Each piece is simple, and an l-face lying in a minimal k-face of
    Delta belongs to exactly k - l + 1 pieces."""
    if not all(q.is_simple() for q in p.pieces):
        return False
    face_sets = [{frozenset(fc.vertices) for fc in q.faces} for q in p.pieces]
    for q in p.pieces:
        for fc in q.faces:
            if fc.dim not in (1, 2):
                continue
            k = _face_dim_in(p.delta, fc.vertices)
            count = sum(frozenset(fc.vertices) in s for s in face_sets)
            if count != k - fc.dim + 1:
                return False
    return True


def check_balanced(p: CutPartition) -> bool:
    return all(p.delta.minimal_face(v).dim == 1 for v in p.new_vertices)


def vertex_is_smooth(q: IntegralPolytope, v: Vector) -> bool:
    dirs = [primitive(sub(b if a == v else a, v)) for a, b in q.vertex_edges(v)]
    return spans_lattice(dirs)


def check_mildly_singular(p: CutPartition) -> bool:
    """Primitive edge directions at every new vertex generate M."""
    return all(
        vertex_is_smooth(q, v) for q in p.pieces for v in p.new_vertices if v in q.vertices
    )


# degeneration ---------------------------------------------------------------


def _fan_of(piece: IntegralPolytope) -> tuple[Vector, ...]:
    return tuple(sorted(u for u, _ in piece.facets))


def rule_rays(p: CutPartition, j: int) -> tuple[Vector, ...]:
    """Rays of P_Delta whose facet reaches into the half of piece j, plus the cut ray.

    "z3 >= 0" is read on the facet of Delta, not on the ray itself; for a
    diamond the ray (0, 0, -1) bounds the upper piece although its own
    third coordinate is negative.
    """
    sign = 1 if j == 0 else -1
    out = {_added_ray(j)}
    for v in p.nabla.vertices:
        face = [m for m in p.delta.vertices if dot(m, v) == -1]
        if any(sign * m[2] > 0 for m in face):
            out.add(v)
    return tuple(sorted(out))


def degeneration_pieces(nabla: IntegralPolytope, p: CutPartition, require_valid: bool = True) -> DegenerationPieces:
    """Fans of the two toric pieces, in adapted coordinates.

    The fans are read off the pieces (their facet normals); ``matches_rule``
    records whether they agree with :func:`rule_rays`.
    """
    if require_valid and not p.valid:
        raise CutError(f"the partition is not valid: {p.flags}")
    if nabla.transform(p.basis) != p.nabla:
        raise CutError("nabla does not match the partition")
    rays = (_fan_of(p.pieces[0]), _fan_of(p.pieces[1]))
    fiber_pts = [v[:2] for v in p.nabla.lattice_points if v[2] == 0]
    dp = DegenerationPieces(rays, p.slice, IntegralPolytope(fiber_pts), p)
    dp.matches_rule = all(rays[j] == rule_rays(p, j) for j in (0, 1))
    return dp


def original_rays(dp: DegenerationPieces, j: int) -> tuple[Vector, ...]:
    """Piece j's rays in the coordinates of the input polytope."""
    inv = dp.partition.basis.inverse()
    return tuple(sorted(inv(r) for r in dp.rays[j]))


def piece_monomials(piece: IntegralPolytope, rays, offsets) -> HypersurfaceEquation:
    """Sections of the divisor sum(offset_i D_i): exponents <m, v_i> + offset_i."""
    monos = []
    for m in piece.lattice_points:
        exps = tuple(dot(m, r) + a for r, a in zip(rays, offsets))
        if min(exps) < 0:
            raise CutError(f"{m} is not a section of the piece's divisor")
        monos.append(CoxMonomial(m, exps))
    names = tuple(f"z{i + 1}" for i in range(len(rays)))
    return HypersurfaceEquation(tuple(rays), names, tuple(monos))


def hypersurface_degeneration(delta: IntegralPolytope, p: CutPartition, pieces: DegenerationPieces | None = None):
    """Monomials of the two pieces and the shared elliptic-curve monomials."""
    if pieces is None:
        pieces = degeneration_pieces(delta_nabla(p), p, require_valid=False)
    eqs = []
    for j, (q, rays) in enumerate(zip(p.pieces, pieces.rays)):
        extra = _added_ray(j)
        eqs.append(piece_monomials(q, rays, [0 if r == extra else 1 for r in rays]))
    shared_pts = sorted(set(p.pieces[0].lattice_points) & set(p.pieces[1].lattice_points))
    fiber = pieces.fiber
    curve = anticanonical_monomials(fiber.vertices, fiber.dual())
    shared = {m[:2] for m in shared_pts}
    if shared != {m.source for m in curve.monomials}:
        raise CutError("shared monomials differ from the fibre's anticanonical monomials")
    pieces.hypersurface_parts = (eqs[0], eqs[1], curve)
    return eqs[0], eqs[1], curve


def delta_nabla(p: CutPartition) -> IntegralPolytope:
    """The original (unadapted) polytope behind a partition."""
    return p.nabla.transform(p.basis.inverse())


def _added_ray(j: int) -> Vector:
    return E3 if j == 0 else (0, 0, -1)


def rational_elliptic_check(j: int, pieces: DegenerationPieces) -> bool:
    """Piece j is the polytope of sum_k D_k - D_e on its fan (e the added ray)."""
    rays = pieces.rays[j]
    extra = _added_ray(j)
    ineqs = [(r, 0 if r == extra else 1) for r in rays]
    try:
        divisor_poly = IntegralPolytope.from_inequalities(ineqs, "M")
    except PolytopeError as exc:
        raise CutError(f"divisor polytope of piece {j}: {exc}") from exc
    piece = pieces.partition.pieces[j]
    if divisor_poly != piece:
        raise CutError(
            f"piece {j} has vertices {piece.vertices}, the divisor polytope has {divisor_poly.vertices}"
        )
    return True


__all__ = [
    "CutError",
    "CutPartition",
    "DegenerationPieces",
    "check_balanced",
    "check_mildly_singular",
    "check_simple_partition",
    "cut",
    "degeneration_pieces",
    "original_rays",
    "rule_rays",
    "hypersurface_degeneration",
    "piece_monomials",
    "rational_elliptic_check",
    "vertex_is_smooth",
]
