"""Generic anticanonical hypersurfaces in Cox coordinates.

A monomial is indexed by its source point m in Delta and has exponent
<m, v_i> + 1 on the Cox variable of ray v_i.  Coefficients stay symbolic
(``a[m]``); numbers only appear in :mod:`toric_k3.kodaira`.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .lattice import Vector, dot
from .polytope import IntegralPolytope


class EquationError(ValueError):
    pass


@dataclass(frozen=True)
class CoxMonomial:
    source: Vector
    exponents: tuple[int, ...]

    @property
    def coefficient_label(self) -> str:
        return "a[" + ",".join(map(str, self.source)) + "]"


@dataclass(frozen=True)
class HypersurfaceEquation:
    rays: tuple[Vector, ...]
    names: tuple[str, ...]
    monomials: tuple[CoxMonomial, ...]

    def exponent_of(self, mono: CoxMonomial, name: str) -> int:
        return mono.exponents[self.names.index(name)]

    def exponent_set(self) -> set[tuple[int, ...]]:
        return {m.exponents for m in self.monomials}

    def exponent_multiset(self) -> list[tuple[int, ...]]:
        return sorted(m.exponents for m in self.monomials)

    def is_degenerate(self) -> bool:
        return not self.monomials

    def to_text(self) -> str:
        """Canonical text: one monomial per line, exponents in ray order."""
        lines = ["# " + " ".join(self.names)]
        for mono in sorted(self.monomials, key=lambda m: m.source):
            lines.append(mono.coefficient_label + " " + " ".join(map(str, mono.exponents)))
        return "\n".join(lines) + "\n"

    def monomial_strings(self) -> list[str]:
        return [format_monomial(m.exponents, self.names) for m in self.monomials]


def format_monomial(exponents: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exponents):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


def default_names(n: int) -> tuple[str, ...]:
    return tuple(f"z{i + 1}" for i in range(n))


def anticanonical_monomials(
    rays: Sequence[Sequence[int]],
    delta: IntegralPolytope,
    names: Sequence[str] | None = None,
) -> HypersurfaceEquation:
    rays = tuple(tuple(r) for r in rays)
    names = tuple(names) if names is not None else default_names(len(rays))
    if len(names) != len(rays):
        raise EquationError("one variable name per ray is required")
    monos = []
    for m in delta.lattice_points:
        exps = tuple(dot(m, v) + 1 for v in rays)
        if min(exps) < 0:
            raise EquationError(f"ray set leaves the dual polytope: negative exponent at m={m}")
        monos.append(CoxMonomial(m, exps))
    return HypersurfaceEquation(rays, names, tuple(monos))


def restrict_to_zero(eq: HypersurfaceEquation, name: str) -> HypersurfaceEquation:
    """Monomials that survive setting the named variable to zero."""
    k = eq.names.index(name)
    keep = tuple(m for m in eq.monomials if m.exponents[k] == 0)
    return HypersurfaceEquation(eq.rays, eq.names, keep)


def restrict_z_zero(eq: HypersurfaceEquation, v_z: Sequence[int]) -> HypersurfaceEquation:
    k = eq.rays.index(tuple(v_z))
    return restrict_to_zero(eq, eq.names[k])


@dataclass
class FiberedEquation:
    """Monomials bucketed by their exponents on the fibre variables.

    ``buckets`` maps the fibre exponent tuple to the list of base exponent
    pairs (top degree, bottom degree), one per monomial.  ``degrees`` holds
    the degree of each bucket as a binary form on the base P^1.
    """

    fiber_names: tuple[str, ...]
    base_names: tuple[str, ...]
    buckets: dict[tuple[int, ...], list[tuple[int, int]]] = field(default_factory=dict)
    degrees: dict[tuple[int, ...], int | None] = field(default_factory=dict)
    sources: dict[tuple[int, ...], list[Vector]] = field(default_factory=dict)
    fiber_class: int | None = None

    def bucket_name(self, key: tuple[int, ...]) -> str:
        return format_monomial(key, self.fiber_names)

    def named_degrees(self) -> dict[str, int | None]:
        return {self.bucket_name(k): d for k, d in self.degrees.items()}

    def monomial_count(self) -> int:
        return sum(len(v) for v in self.buckets.values())


def group_monomials(
    eq: HypersurfaceEquation,
    fiber_names: Sequence[str],
    heights: dict[str, int],
) -> FiberedEquation:
    """Bucket ``eq`` by fibre exponents.

    ``heights`` gives <m_phi, v> for every base variable; the top degree of a
    monomial is sum(h * e) over positive heights and the bottom degree is
    sum(|h| * e) over negative ones.  A bucket's monomials differ by
    multiples of m_phi, so its P^1 degree is top + bottom when that is
    constant across the bucket.
    """
    fiber_names = tuple(fiber_names)
    base_names = tuple(n for n in eq.names if n not in fiber_names)
    missing = [n for n in fiber_names if n not in eq.names] + [n for n in base_names if n not in heights]
    if missing:
        raise EquationError(f"variables without a role: {missing}")
    fidx = [eq.names.index(n) for n in fiber_names]
    buckets: dict = defaultdict(list)
    sources: dict = defaultdict(list)
    for mono in eq.monomials:
        key = tuple(mono.exponents[i] for i in fidx)
        top = bottom = 0
        for n in base_names:
            h, e = heights[n], mono.exponents[eq.names.index(n)]
            if h > 0:
                top += h * e
            elif h < 0:
                bottom += -h * e
            elif e:
                raise EquationError(f"base variable {n} has height 0")
        buckets[key].append((top, bottom))
        sources[key].append(mono.source)
    degrees = {}
    for key, pairs in buckets.items():
        totals = {t + b for t, b in pairs}
        degrees[key] = totals.pop() if len(totals) == 1 else None
    return FiberedEquation(fiber_names, base_names, dict(buckets), degrees, dict(sources))


def group_by_fiber(eq: HypersurfaceEquation, f) -> FiberedEquation:
    """Bucket by fibre variables (rays in the fibre plane) for fibration ``f``."""
    heights = {}
    fiber_names = []
    for ray, name in zip(eq.rays, eq.names):
        h = f.height(ray)
        if h == 0:
            fiber_names.append(name)
        else:
            heights[name] = h
    if not any(r in eq.rays for r in f.fiber_vertices):
        raise EquationError("the ray set does not contain the fibre vertices")
    order = list(f.fiber_class.variable_names)
    fiber_names.sort(key=lambda n: (order.index(n), "") if n in order else (len(order), n))
    fe = group_monomials(eq, fiber_names, heights)
    fe.fiber_class = f.fiber_class.index
    return fe


# toric flexes ---------------------------------------------------------------


def _fiber_coords(f, v_z: Sequence[int]) -> Vector:
    v_z = tuple(v_z)
    return f.to_fiber(v_z) if len(v_z) == 3 else v_z


def dual_edge_length(polygon: IntegralPolytope, vertex: Sequence[int]) -> int:
    """Lattice length of the edge of the dual polygon dual to ``vertex``."""
    normals = [u for u, c in polygon.facets if dot(u, vertex) == -c]
    if len(normals) != 2:
        raise EquationError(f"{tuple(vertex)} is not a vertex of the polygon")
    a, b = normals
    return math.gcd(a[0] - b[0], a[1] - b[1])


def anticanonical_degree_oracle(polygon: IntegralPolytope, vertex: Sequence[int]) -> int:
    """-K . D_v on the smooth toric surface with all boundary points as rays.

    With consecutive rays u_-, u, u_+ and u_- + u_+ = b u one has
    D_u^2 = -b and -K . D_u = 2 - b.
    """
    vertex = tuple(vertex)
    pts = sorted(polygon.boundary_points, key=lambda p: math.atan2(p[1], p[0]))
    i = pts.index(vertex)
    prev, nxt = pts[i - 1], pts[(i + 1) % len(pts)]
    s = (prev[0] + nxt[0], prev[1] + nxt[1])
    # s is a multiple of the primitive ray ``vertex``
    b = s[0] // vertex[0] if vertex[0] else s[1] // vertex[1]
    return 2 - b


def is_toric_flex(f, v_z: Sequence[int]) -> bool:
    """z = 0 meets the general fibre in exactly one point."""
    return dual_edge_length(f.fiber, _fiber_coords(f, v_z)) == 1


# Weierstrass completion for fibre class 15 -----------------------------------


@dataclass(frozen=True)
class WeierstrassDegrees:
    deg_a: int | None
    deg_b: int | None
    tate_degrees: dict


@dataclass(frozen=True)
class NoStandardForm:
    reason: str
    fibered: FiberedEquation


TATE_BUCKETS = {"x*y*z": 1, "x^2*z^2": 2, "y*z^3": 3, "x*z^4": 4, "z^6": 6}


def _dmax(*vals):
    vals = [v for v in vals if v is not None]
    return max(vals) if vals else None


def _dadd(*vals):
    return None if any(v is None for v in vals) else sum(vals)


def weierstrass_completion(fe: FiberedEquation) -> WeierstrassDegrees | NoStandardForm:
    """Base degrees of (a, b) in y^2 = x^3 + a x z^4 + b z^6.

    Completing the square and the cube turns the Tate coefficients a1..a6
    (buckets xyz, x^2z^2, yz^3, xz^4, z^6) into a = -c4/48, b = -c6/864.
    Degrees are tracked through that algebra; a missing bucket has no
    degree (identically zero).
    """
    if fe.fiber_class != 15:
        return NoStandardForm(f"fibre class {fe.fiber_class} has no standard form here", fe)
    named = fe.named_degrees()
    for lead in ("x^3", "y^2"):
        if lead not in named:
            raise EquationError(f"bucket {lead} is missing")
        if named[lead] != 0:
            raise EquationError(f"bucket {lead} must have base degree 0, found {named[lead]}")
    d = {}
    for name, i in TATE_BUCKETS.items():
        if name in named and named[name] is None:
            raise EquationError(f"bucket {name} is not homogeneous on the base")
        d[i] = named.get(name)
    weights = {d[i] / i for i in d if d[i] is not None}
    if len(weights) > 1:
        raise EquationError(f"Tate degrees {d} are not weighted-homogeneous")
    b2 = _dmax(_dadd(d[1], d[1]), d[2])
    b4 = _dmax(d[4], _dadd(d[1], d[3]))
    b6 = _dmax(_dadd(d[3], d[3]), d[6])
    c4 = _dmax(_dadd(b2, b2), b4)
    c6 = _dmax(_dadd(b2, b2, b2), _dadd(b2, b4), b6)
    return WeierstrassDegrees(c4, c6, d)
