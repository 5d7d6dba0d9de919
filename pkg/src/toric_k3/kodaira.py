"""Discriminants and Kodaira fibre types by sampling over a prime field.

Binary forms on the base P^1 are stored as a coefficient list in the affine
coordinate u plus a formal degree; the order at infinity is the formal
degree minus the actual degree.  Roots are never found explicitly: a
square-free decomposition of delta, refined by gcds with a and b and their
derivatives, gives the vanishing orders at every root over the algebraic
closure.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

DEFAULT_PRIME = 2**31 - 1
INF = math.inf

Poly = list  # coefficients mod p, lowest degree first, no trailing zeros


class UnstableGenericity(RuntimeError):
    pass


# polynomials over F_p --------------------------------------------------------


def trim(a: Poly) -> Poly:
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: Poly) -> int:
    return len(a) - 1 if a else -1


def padd(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def pscale(a: Poly, c: int, p: int) -> Poly:
    return trim([x * c % p for x in a])


def pmul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def pdivmod(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        trim(a)
    return trim(q), a


def pgcd(a: Poly, b: Poly, p: int) -> Poly:
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, pdivmod(a, b, p)[1]
    return pscale(a, pow(a[-1], p - 2, p), p) if a else a


def pderiv(a: Poly, p: int) -> Poly:
    return trim([i * a[i] % p for i in range(1, len(a))])


def order_at_zero(a: Poly) -> float:
    for i, x in enumerate(a):
        if x:
            return i
    return INF


def squarefree_decomposition(a: Poly, p: int) -> dict[int, Poly]:
    """Yun's algorithm: a = c * prod P_k^k with P_k square-free, coprime.

    Valid while deg a < p, which holds for every form used here.
    """
    if deg(a) >= p:
        raise ValueError("degree must stay below the characteristic")
    out = {}
    b = pgcd(a, pderiv(a, p), p)
    c = pdivmod(a, b, p)[0]
    d = padd(pdivmod(pderiv(a, p), b, p)[0], pscale(pderiv(c, p), p - 1, p), p)
    k = 1
    while deg(c) > 0:
        g = pgcd(c, d, p)
        if deg(g) > 0:
            out[k] = g
        c = pdivmod(c, g, p)[0]
        d = padd(pdivmod(d, g, p)[0], pscale(pderiv(c, p), p - 1, p), p)
        k += 1
    return out


def _split_by_order(factor: Poly, f: Poly, p: int) -> list[tuple[Poly, float]]:
    """Split a square-free factor by the vanishing order of f at its roots."""
    if not f:
        return [(factor, INF)]
    pieces = []
    rest = factor
    derivs = f
    j = 0
    while deg(rest) > 0:
        g = pgcd(rest, derivs, p)
        if deg(g) < deg(rest):
            pieces.append((pdivmod(rest, g, p)[0] if g else rest, j))
        rest = g
        derivs = pderiv(derivs, p)
        j += 1
        if deg(rest) > 0 and not derivs:
            raise ValueError("vanishing order exceeds the degree")
    return pieces


# Kodaira table ---------------------------------------------------------------

EULER = {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}


def kodaira_type(oa: float, ob: float, od: int) -> str:
    """Fibre type from (ord a, ord b, ord delta) for a minimal model.

    Only I_n and I*_n are exercised by known examples; the remaining rows
    are the textbook table.
    """
    if od == 0:
        return "I0"
    if oa == 0 and ob == 0:
        return f"I{od}"
    if oa >= 2 and ob >= 3 and od >= 6 and (oa == 2 or ob == 3):
        return f"I{od - 6}*"
    if ob == 1 and oa >= 1 and od == 2:
        return "II"
    if oa == 1 and ob >= 2 and od == 3:
        return "III"
    if oa >= 2 and ob == 2 and od == 4:
        return "IV"
    if oa >= 3 and ob == 4 and od == 8:
        return "IV*"
    if oa == 3 and ob >= 5 and od == 9:
        return "III*"
    if oa >= 4 and ob == 5 and od == 10:
        return "II*"
    raise ValueError(f"no Kodaira type for orders {(oa, ob, od)} (non-minimal?)")


# profiles --------------------------------------------------------------------


@dataclass(frozen=True)
class KodairaEntry:
    point: str
    ord_a: float
    ord_b: float
    ord_delta: int
    kind: str


@dataclass
class KodairaProfile:
    entries: list[KodairaEntry]
    total_delta_degree: int
    notes: dict = field(default_factory=dict)

    def type_counts(self) -> Counter:
        return Counter(e.kind for e in self.entries)

    def signature(self) -> tuple:
        return (self.total_delta_degree, tuple(sorted(self.type_counts().items())))

    def euler_sum(self) -> int:
        return sum(e.ord_delta for e in self.entries)


@dataclass(frozen=True)
class SamplerConfig:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    attempts: int = 4


def discriminant(a: Poly, b: Poly, p: int) -> Poly:
    return padd(pscale(pmul(pmul(a, a, p), a, p), 4, p), pscale(pmul(b, b, p), 27, p), p)


def profile_from_forms(a: Poly, b: Poly, deg_a: int, deg_b: int, p: int = DEFAULT_PRIME) -> KodairaProfile:
    """Profile of y^2 = x^3 + a x + b with a, b forms of degrees (deg_a, deg_b).

    The forms must have weights 4n and 6n for one n; the discriminant then
    has degree 12n.
    """
    a, b = trim(list(a)), trim(list(b))
    if deg(a) > deg_a or deg(b) > deg_b:
        raise ValueError("form exceeds its formal degree")
    if deg_a * 3 != deg_b * 2:
        raise ValueError("degrees must be (4n, 6n)")
    d_deg = 3 * deg_a
    delta = discriminant(a, b, p)
    if not delta:
        raise ValueError("discriminant vanishes identically")
    entries = []
    for k, factor in sorted(squarefree_decomposition(delta, p).items()):
        for j, (piece_a, oa) in enumerate(_split_by_order(factor, a, p)):
            for l, (piece, ob) in enumerate(_split_by_order(piece_a, b, p)):
                kind = kodaira_type(oa, ob, k)
                for r in range(deg(piece)):
                    entries.append(KodairaEntry(f"root[{k}.{j}.{l}.{r}]", oa, ob, k, kind))
    od_inf = d_deg - deg(delta)
    if od_inf:
        oa = deg_a - deg(a) if a else INF
        ob = deg_b - deg(b) if b else INF
        entries.append(KodairaEntry("inf", oa, ob, od_inf, kodaira_type(oa, ob, od_inf)))
    return KodairaProfile(entries, d_deg)


def random_form(degree: int, rng: random.Random, p: int, support: Sequence[int] | None = None) -> Poly:
    idx = range(degree + 1) if support is None else support
    out = [0] * (degree + 1)
    for i in idx:
        out[i] = rng.randrange(1, p)
    return trim(out)


def agreeing_profile(draw: Callable[[random.Random], KodairaProfile], config: SamplerConfig) -> KodairaProfile:
    """Draw profiles from independent seeds until two consecutive ones agree."""
    seen = None
    for attempt in range(config.attempts + 1):
        prof = draw(random.Random(f"{config.seed}:{attempt}"))
        if seen is not None and seen.signature() == prof.signature():
            prof.notes["samples"] = attempt + 1
            return prof
        seen = prof
    raise UnstableGenericity("samples disagree: raise the prime or the number of attempts")


def kodaira_profile(
    deg_a: int,
    deg_b: int,
    config: SamplerConfig = SamplerConfig(),
    support_a: Sequence[int] | None = None,
    support_b: Sequence[int] | None = None,
) -> KodairaProfile:
    """Sampled profile of y^2 = x^3 + a x + b for random forms of the given degrees.

    ``support_*`` restricts which powers of u carry a coefficient (forced
    vanishing); an empty support makes the form identically zero.
    """
    p = config.prime
    n = max(-(-deg_a // 4), -(-deg_b // 6))

    def draw(rng):
        a = random_form(deg_a, rng, p, support_a)
        b = random_form(deg_b, rng, p, support_b)
        return profile_from_forms(a, b, 4 * n, 6 * n, p)

    return agreeing_profile(draw, config)


# Laurent data from a torus chart ---------------------------------------------


@dataclass
class LaurentPair:
    """Weierstrass data (A, B) as Laurent polynomials: dict exponent -> coeff."""

    a: dict[int, int]
    b: dict[int, int]


def laurent_to_forms(pair: LaurentPair, p: int) -> tuple[Poly, Poly, int, int]:
    """Shift by a (u^{4k}, u^{6k}) twist to a minimal model at 0 and at infinity."""
    a = {e: c % p for e, c in pair.a.items() if c % p}
    b = {e: c % p for e, c in pair.b.items() if c % p}
    if not a and not b:
        raise ValueError("both Weierstrass coefficients vanish")
    lo_a = min(a) if a else INF
    lo_b = min(b) if b else INF
    k = max(math.ceil(-lo_a / 4) if a else -INF, math.ceil(-lo_b / 6) if b else -INF)
    k = int(k)
    a = {e + 4 * k: c for e, c in a.items()}
    b = {e + 6 * k: c for e, c in b.items()}
    hi_a = max(a) if a else -INF
    hi_b = max(b) if b else -INF
    n = int(max(math.ceil(hi_a / 4) if a else -INF, math.ceil(hi_b / 6) if b else -INF))
    pa = trim([a.get(i, 0) for i in range(4 * n + 1)])
    pb = trim([b.get(i, 0) for i in range(6 * n + 1)])
    return pa, pb, 4 * n, 6 * n


def lmul(x: dict, y: dict, p: int) -> dict:
    out: dict = {}
    for i, a in x.items():
        for j, b in y.items():
            out[i + j] = (out.get(i + j, 0) + a * b) % p
    return {k: v for k, v in out.items() if v}


def ladd(*terms: dict, p: int) -> dict:
    out: dict = {}
    for t in terms:
        for k, v in t.items():
            out[k] = (out.get(k, 0) + v) % p
    return {k: v for k, v in out.items() if v}


def lscale(x: dict, c, p: int) -> dict:
    c = c % p if isinstance(c, int) else c
    return {k: v * c % p for k, v in x.items() if v * c % p}


def tate_to_weierstrass(a1: dict, a2: dict, a3: dict, a4: dict, a6: dict, p: int) -> LaurentPair:
    """(a1..a6) -> (A, B) = (-27 c4, -54 c6), a scaled form of (-c4/48, -c6/864)."""
    b2 = ladd(lmul(a1, a1, p), lscale(a2, 4, p), p=p)
    b4 = ladd(lmul(a1, a3, p), lscale(a4, 2, p), p=p)
    b6 = ladd(lmul(a3, a3, p), lscale(a6, 4, p), p=p)
    c4 = ladd(lmul(b2, b2, p), lscale(b4, -24, p), p=p)
    c6 = ladd(
        lscale(lmul(lmul(b2, b2, p), b2, p), -1, p),
        lscale(lmul(b2, b4, p), 36, p),
        lscale(b6, -216, p),
        p=p,
    )
    return LaurentPair(lscale(c4, -27, p), lscale(c6, -54, p))


def quartic_to_weierstrass(q: Sequence[dict], p: int) -> LaurentPair:
    """Jacobian of w^2 = q0 x^4 + q1 x^3 y + q2 x^2 y^2 + q3 x y^3 + q4 y^4.

    Uses the invariants I = 12 q0 q4 - 3 q1 q3 + q2^2 and
    J = 72 q0 q2 q4 + 9 q1 q2 q3 - 27 q0 q3^2 - 27 q4 q1^2 - 2 q2^3;
    the Jacobian is Y^2 = X^3 - 27 I X - 27 J.
    """
    a, b, c, d, e = q
    m = lambda *xs: _lprod(xs, p)  # noqa: E731
    inv_i = ladd(lscale(m(a, e), 12, p), lscale(m(b, d), -3, p), m(c, c), p=p)
    inv_j = ladd(
        lscale(m(a, c, e), 72, p),
        lscale(m(b, c, d), 9, p),
        lscale(m(a, d, d), -27, p),
        lscale(m(e, b, b), -27, p),
        lscale(m(c, c, c), -2, p),
        p=p,
    )
    return LaurentPair(lscale(inv_i, -27, p), lscale(inv_j, -27, p))


def _lprod(xs, p):
    out = {0: 1}
    for x in xs:
        out = lmul(out, x, p)
    return out


# sampling a polytope's own family ----------------------------------------------


def chart_buckets(f, rng: random.Random, p: int) -> dict[str, dict[int, int]]:
    """Random member of the anticanonical family on the torus chart.

    In the fibre frame a monomial chi^m reads t1^m1 t2^m2 u^m3; monomials
    with the same (m1, m2) form one fibre bucket whose coefficient is a
    Laurent polynomial in the base coordinate u.  Buckets are keyed by the
    fibre monomial in the reference variable names.
    """
    from .cox import format_monomial

    frame_dual = f.frame.dual()
    ref = f.fiber_class.reference_vertices
    names = f.fiber_class.variable_names
    out: dict[str, dict[int, int]] = {}
    for m in f.parent.dual().lattice_points:
        w = frame_dual(m)
        exps = [w[0] * v[0] + w[1] * v[1] + 1 for v in ref]
        key = format_monomial(exps, names)
        out.setdefault(key, {})
        out[key][w[2]] = (out[key].get(w[2], 0) + rng.randrange(1, p)) % p
    return out


def _bucket(buckets, name):
    return buckets.get(name, {})


def jacobian_from_buckets(cls: int, buckets: dict[str, dict[int, int]], p: int) -> LaurentPair | None:
    """Weierstrass data of the fibre family for classes 15, 4 and 9."""
    g = lambda n: _bucket(buckets, n)  # noqa: E731
    if cls == 15:
        cx, cy = g("x^3"), g("y^2")
        m = lambda *xs: _lprod(xs, p)  # noqa: E731
        a1 = lscale(g("x*y*z"), -1, p)
        a2 = lscale(m(g("x^2*z^2"), cy), -1, p)
        a3 = m(g("y*z^3"), cx, cy)
        a4 = m(g("x*z^4"), cx, cy, cy)
        a6 = lscale(m(g("z^6"), cx, cx, cy, cy, cy), -1, p)
        return tate_to_weierstrass(a1, a2, a3, a4, a6, p)
    if cls in (4, 9):
        cz = g("z^2")
        l0, l1, l2 = g("x^2*z"), g("x*y*z"), g("y^2*z")
        q = [g("x^4"), g("x^3*y"), g("x^2*y^2"), g("x*y^3"), g("y^4")]
        sq = [
            lmul(l0, l0, p),
            lscale(lmul(l0, l1, p), 2, p),
            ladd(lmul(l1, l1, p), lscale(lmul(l0, l2, p), 2, p), p=p),
            lscale(lmul(l1, l2, p), 2, p),
            lmul(l2, l2, p),
        ]
        quartic = [ladd(s, lscale(lmul(cz, qi, p), -4, p), p=p) for s, qi in zip(sq, q)]
        if cls == 4:
            return quartic_to_weierstrass(quartic, p)
        # class 9 is the quotient of the class 4 curve by (x, w) -> (-x, -w);
        # with X = x^2, W = x w it becomes W^2 = X (al X^2 + be X + ga)
        al, _, be, _, ga = quartic
        zero: dict = {}
        return tate_to_weierstrass(zero, be, zero, lmul(al, ga, p), zero, p)
    return None


def polytope_profile(f, config: SamplerConfig = SamplerConfig()) -> KodairaProfile | None:
    """Sampled Kodaira profile of the fibration f of the parent's K3 family.

    Returns None for fibre classes without an implemented Jacobian.
    """
    if jacobian_from_buckets(f.fiber_class.index, {}, config.prime) is None:
        return None
    p = config.prime

    def draw(rng):
        pair = jacobian_from_buckets(f.fiber_class.index, chart_buckets(f, rng, p), p)
        a, b, da, db = laurent_to_forms(pair, p)
        return profile_from_forms(a, b, da, db, p)

    return agreeing_profile(draw, config)
