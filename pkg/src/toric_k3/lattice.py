"""Exact integer linear algebra on the dual lattices N and M.

Vectors are plain tuples of Python ints (unbounded, so nothing can wrap).
Matrices are tuples of row tuples.  Everything here is small: n <= 4.
"""

from __future__ import annotations

import itertools
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


class LatticeError(ValueError):
    pass


class LatticeVector(NamedTuple):
    """Integer point tagged with the lattice it lives in ("N" or "M")."""

    coords: Vector
    lattice_role: str = "N"


def _coords(v) -> Vector:
    if isinstance(v, LatticeVector):
        return v.coords
    return tuple(int(x) for x in v)


def pairing(m, v) -> int:
    """The natural pairing <m, v> between M and N."""
    if isinstance(m, LatticeVector) and m.lattice_role != "M":
        raise LatticeError("first argument of pairing must live in M")
    if isinstance(v, LatticeVector) and v.lattice_role != "N":
        raise LatticeError("second argument of pairing must live in N")
    m, v = _coords(m), _coords(v)
    if len(m) != len(v):
        raise LatticeError(f"dimension mismatch: {len(m)} vs {len(v)}")
    return sum(a * b for a, b in zip(m, v))


def dot(m, v) -> int:
    """pairing() with a fast path for plain coordinate tuples."""
    if type(m) is tuple and type(v) is tuple and len(m) == len(v):
        return sum(map(operator.mul, m, v))
    return pairing(m, v)


def add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(k: int, v: Sequence[int]) -> Vector:
    return tuple(k * a for a in v)


def content(v: Sequence[int]) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    return math.gcd(*_coords(v))


def is_primitive(v) -> bool:
    g = content(v)
    if g == 0:
        raise LatticeError("zero vector has no primitivity")
    return g == 1


def primitive(v: Sequence[int]) -> Vector:
    g = content(v)
    if g == 0:
        raise LatticeError("zero vector has no primitive direction")
    return tuple(a // g for a in v)


def cross(u: Sequence[int], v: Sequence[int]) -> Vector:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant by cofactor expansion (exact; fine for n <= 4)."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise LatticeError("determinant of a non-square matrix")
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    total = 0
    for j, a in enumerate(rows[0]):
        if a:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * a * det(minor)
    return total


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q via fraction-free elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r]
        for i in range(r + 1, len(m)):
            q = m[i][c]
            if q:
                m[i] = [p[c] * x - q * y for x, y in zip(m[i], p)]
        r += 1
        if r == len(m):
            break
    return r


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*a))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (D, U, V) with U @ A @ V == D, D diagonal, d_1 | d_2 | ...

    U and V are unimodular.  Works on any rectangular integer matrix.
    """
    d = [list(map(int, r)) for r in a]
    rows = len(d)
    cols = len(d[0]) if rows else 0
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):  # col dst += k * col src
        for r in d:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            nonzero = [(abs(d[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = d[t][t]
            done = True
            for i in range(t + 1, rows):
                q = d[i][t] // p
                if q:
                    add_row(t, i, -q)
                if d[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = d[t][j] // p
                if q:
                    add_col(t, j, -q)
                if d[t][j]:
                    done = False
            if not done:
                continue
            # divisibility: fold any offending entry into row t and retry
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if t < rows and t < cols and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    to_t = lambda m: tuple(tuple(r) for r in m)  # noqa: E731
    return to_t(d), to_t(u), to_t(v)


def elementary_divisors(a: Sequence[Sequence[int]]) -> list[int]:
    d, _, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def spans_lattice(vectors: Iterable[Sequence[int]]) -> bool:
    """True iff the integer span of ``vectors`` is all of Z^n."""
    vecs = [_coords(v) for v in vectors]
    if not vecs:
        raise LatticeError("spans_lattice needs at least one vector")
    n = len(vecs[0])
    if any(len(v) != n for v in vecs):
        raise LatticeError("vectors of mixed dimension")
    if len(vecs) < n:
        return False
    divs = elementary_divisors(transpose(vecs))
    return len(divs) == n and all(x == 1 for x in divs)


def sublattice_index(vectors: Iterable[Sequence[int]]) -> int:
    """Index of the span in its saturation (1 means saturated); 0 if trivial."""
    vecs = [_coords(v) for v in vectors]
    divs = [x for x in elementary_divisors(vecs) if x]
    return math.prod(divs) if divs else 0


def solve_rational(a: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Solve the square system A x = b over Q; None if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def matrix_with_last_row(m: Sequence[int]) -> Matrix:
    """Unimodular matrix (det +1) whose last row is the primitive vector ``m``.

    As a map on N it sends v to coordinates whose last entry is <m, v>.
    """
    m = _coords(m)
    if not is_primitive(m):
        raise LatticeError(f"{m} is not primitive")
    # m @ V = (±1, 0, ...)  so the first row of V^{-1} is ±m
    d, u, v = smith_normal_form([m])
    rows = list(UnimodularMap(v).inverse().matrix)
    sign = d[0][0] * u[0][0]
    rows[0] = tuple(sign * x for x in rows[0])
    ordered = rows[1:] + [rows[0]]
    if det(ordered) < 0:
        ordered[0] = tuple(-x for x in ordered[0])
    return tuple(ordered)


@dataclass(frozen=True)
class UnimodularMap:
    """A lattice automorphism, acting on column vectors."""

    matrix: Matrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in r) for r in self.matrix))
        if abs(det(self.matrix)) != 1:
            raise LatticeError(f"matrix {self.matrix} is not unimodular")

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @property
    def determinant(self) -> int:
        return det(self.matrix)

    @classmethod
    def identity(cls, n: int) -> "UnimodularMap":
        return cls(identity(n))

    def __call__(self, v: Sequence[int]) -> Vector:
        v = _coords(v)
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.matrix)

    def apply_all(self, vs: Iterable[Sequence[int]]) -> list[Vector]:
        return [self(v) for v in vs]

    def compose(self, other: "UnimodularMap") -> "UnimodularMap":
        """self after other."""
        return UnimodularMap(matmul(self.matrix, other.matrix))

    def inverse(self) -> "UnimodularMap":
        return self._inverse

    @cached_property
    def _inverse(self) -> "UnimodularMap":
        n = self.dimension
        dt = self.determinant
        adj = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [r[:j] + r[j + 1:] for k, r in enumerate(self.matrix) if k != i]
                adj[j][i] = (-1) ** (i + j) * det(minor)
        return UnimodularMap(tuple(tuple(x * dt for x in r) for r in adj))

    def dual(self) -> "UnimodularMap":
        """Contragredient action on the dual lattice: <g* m, g v> = <m, v>."""
        return self._dual

    @cached_property
    def _dual(self) -> "UnimodularMap":
        return UnimodularMap(transpose(self.inverse().matrix))


def find_linear_map(sources: Sequence[Vector], targets: Sequence[Vector]) -> UnimodularMap | None:
    """The unimodular map sending sources[i] -> targets[i] (n independent sources)."""
    n = len(sources[0])
    rows = []
    for i in range(n):
        sol = solve_rational(sources, [t[i] for t in targets])
        if sol is None or any(x.denominator != 1 for x in sol):
            return None
        rows.append(tuple(int(x) for x in sol))
    if abs(det(rows)) != 1:
        return None
    return UnimodularMap(tuple(rows))


def independent_subset(points: Sequence[Vector]) -> list[Vector]:
    """Lexicographically first n linearly independent points."""
    n = len(points[0])
    for combo in itertools.combinations(points, n):
        if det(combo) != 0:
            return list(combo)
    raise LatticeError("points do not span the ambient space")


def find_unimodular_equivalence(p, q, bound: int = 64, accept=None) -> UnimodularMap | None:
    """A GL(n, Z) map carrying the vertex set of ``p`` onto that of ``q``.

    ``p`` and ``q`` are IntegralPolytope-like (anything with ``vertices``) or
    plain vertex sequences.  The search sends a fixed independent set of
    vertices of p to every ordered choice of vertices of q, so it is
    exhaustive; the first hit in that fixed order is returned.  ``accept``
    optionally filters candidate maps (e.g. to preserve a plane).
    """
    pv = sorted(_coords(v) for v in getattr(p, "vertices", p))
    qv = sorted(_coords(v) for v in getattr(q, "vertices", q))
    for v in itertools.chain(pv, qv):
        if any(abs(x) > bound for x in v):
            raise LatticeError(f"vertex {v} exceeds coordinate bound {bound}")
    if len(pv) != len(qv) or len(pv[0]) != len(qv[0]):
        return None
    p_pts = getattr(p, "lattice_points", None)
    q_pts = getattr(q, "lattice_points", None)
    if p_pts is not None and q_pts is not None and len(p_pts) != len(q_pts):
        return None
    p_fac = getattr(p, "facets", None)
    q_fac = getattr(q, "facets", None)
    if p_fac is not None and q_fac is not None and len(p_fac) != len(q_fac):
        return None
    basis = independent_subset(pv)
    target = set(qv)
    for images in itertools.permutations(qv, len(basis)):
        g = find_linear_map(basis, images)
        if g is not None and set(g.apply_all(pv)) == target and (accept is None or accept(g)):
            return g
    return None
