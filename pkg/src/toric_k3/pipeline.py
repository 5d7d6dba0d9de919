"""End-to-end analysis of a vertex record, and deterministic batch scans.

Every stage is gated on its preconditions; a stage that cannot run leaves a
``"not applicable: <reason>"`` string in its slot.  Internal consistency
checks that fail are collected under ``violations``.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

from .cox import NoStandardForm, anticanonical_monomials, is_toric_flex
from .cut import CutError, cut, degeneration_pieces, hypersurface_degeneration, rational_elliptic_check
from .fibration import (
    FibrationData,
    condition1,
    condition2,
    condition3,
    find_fibrations,
    has_section_at_infinity,
    monomial_section_at_infinity,
)
from .intersection import (
    TriangulationError,
    fiber_intersection,
    is_toric_section,
    maximal_subdivision,
    semistable_fiber_count,
)
from .io import PolytopeRecord
from .kodaira import DEFAULT_PRIME, SamplerConfig, UnstableGenericity, polytope_profile
from .polytope import IntegralPolytope, PolytopeError
from .semistable import SemistableError, candelas_characterization, candelas_font_model, enumerate_semistable

SCHEMA = "toric-k3-report/1"


def na(reason: str) -> str:
    return f"not applicable: {reason}"


@dataclass(frozen=True)
class AnalysisConfig:
    bound: int = 6
    prime: int = DEFAULT_PRIME
    seed: int = 0
    fiber_class: int | None = None
    kodaira: bool = True
    enumerate_semistable: bool = False


def _vec(v) -> list[int]:
    return list(v)


def _vecs(vs) -> list[list[int]]:
    return [list(v) for v in vs]


class _Report:
    def __init__(self):
        self.violations: list[str] = []

    def check(self, ok: bool, message: str) -> None:
        if not ok:
            self.violations.append(message)


# per-fibration stages -------------------------------------------------------


def _conditions(f: FibrationData, r: _Report) -> dict:
    c1 = condition1(f)[0]
    c3 = condition3(f)
    out = {"1)": c1, "2)": None, "3)": bool(c3)}
    if c1:
        c2 = condition2(f, "image")
        r.check(c2 == condition2(f, "facet"), f"condition 2 routes disagree at normal {f.normal}")
        out["2)"] = c2
    else:
        out["2)"] = False
    return out


def _vertex_reports(P, D, f: FibrationData, tri, r: _Report) -> list[dict]:
    names = f.fiber_vertex_names()
    rays = sorted(set(P.vertices) | set(f.fiber_vertices))
    eq = anticanonical_monomials(rays, D)
    out = []
    for v in f.fiber_vertices:
        edge = P.edge_through(v)
        section = has_section_at_infinity(f, v)
        r.check(
            section == monomial_section_at_infinity(eq, f, v),
            f"section at infinity at {v}: edge test and monomial test disagree",
        )
        item = {
            "vertex": _vec(v),
            "name": names[v],
            "section_at_infinity": _vecs(edge) if section else None,
            "toric_flex": is_toric_flex(f, v),
        }
        if tri is None:
            item["fiber_intersection"] = na("no maximal triangulation")
            item["toric_section"] = na("no maximal triangulation")
        else:
            fi = fiber_intersection(v, f, tri)
            rep = is_toric_section(v, f, tri)
            item["fiber_intersection"] = fi
            if rep.applicable:
                r.check(rep.criterion == (fi == 1), f"section criterion and fibre intersection disagree at {v}")
                item["toric_section"] = rep.criterion
            else:
                item["toric_section"] = na("; ".join(rep.failed))
        out.append(item)
    return out


def _models(P, f: FibrationData, config: AnalysisConfig) -> list[dict] | str:
    sections = f.sections_at_infinity
    if not sections:
        return na("no section at infinity")
    out = []
    for v_z, _ in sections:
        item: dict = {"v_z": _vec(v_z), "name": f.fiber_variable(v_z)}
        try:
            wm = candelas_font_model(P, f, v_z)
        except SemistableError as exc:
            item["model"] = na(str(exc))
            out.append(item)
            continue
        ss = wm.semistable
        item["semistable_vertices"] = _vecs(ss.hull.vertices)
        item["L"] = [_vec(ss.v_s), _vec(ss.v_t)]
        item["spans_lattice"] = ss.spans
        item["model_monomials"] = len(wm.model_equation.monomials)
        item["surviving_monomials"] = wm.surviving_count()
        item["bucket_degrees"] = dict(sorted(wm.fibered.named_degrees().items()))
        wd = wm.weierstrass_degrees()
        if isinstance(wd, NoStandardForm):
            item["weierstrass"] = na(wd.reason)
        else:
            item["weierstrass"] = {"deg_a": wd.deg_a, "deg_b": wd.deg_b}
        if ss.spans:
            counts = semistable_fiber_count(ss.hull, wm.fibration)
            item["model_singular_fibers"] = dict(sorted(counts.items()))
        if config.enumerate_semistable:
            fiber2d = f.fiber.transform(f.class_map)
            ref_vz = f.class_map(f.to_fiber(v_z))
            found = enumerate_semistable(fiber2d, ref_vz, config.bound)
            item["semistable_family"] = [
                {"v_s": _vec(s.v_s), "spans_lattice": s.spans} for s in found
            ]
        out.append(item)
    return out


def _kodaira(f: FibrationData, config: AnalysisConfig, label: str) -> dict | str:
    if not config.kodaira:
        return na("disabled")
    seed = f"{config.seed}:{label}:{','.join(map(str, f.normal))}"
    try:
        prof = polytope_profile(f, SamplerConfig(config.prime, seed))
    except UnstableGenericity as exc:
        return na(str(exc))
    if prof is None:
        return na(f"no Jacobian formula for fibre class {f.fiber_class.index}")
    counts = prof.type_counts()
    return {"discriminant_degree": prof.total_delta_degree, "fibers": dict(sorted(counts.items()))}


def _cut(P, D, f: FibrationData, conds: dict, r: _Report) -> dict | str:
    if not conds["1)"]:
        return na("condition 1 fails")
    if not conds["2)"]:
        return na("condition 2 fails")
    if not D.is_simple():
        return na("the dual polytope is not simple")
    try:
        p = cut(D, f)
    except CutError as exc:
        return na(str(exc))
    d, d1, d2 = p.delta, p.pieces[0], p.pieces[1]
    identity = len(d.lattice_points) == len(d1.lattice_points) + len(d2.lattice_points) - len(p.slice.lattice_points)
    r.check(identity, f"lattice-point partition identity fails at normal {f.normal}")
    out = {
        "flags": dict(p.flags),
        "valid": p.valid,
        "new_vertices": _vecs(p.new_vertices),
        "pieces": [_vecs(d1.vertices), _vecs(d2.vertices)],
    }
    dp = degeneration_pieces(P, p, require_valid=False)
    out["piece_rays"] = [_vecs(dp.rays[0]), _vecs(dp.rays[1])]
    out["rays_match_rule"] = dp.matches_rule
    try:
        hypersurface_degeneration(D, p, dp)
        out["rational_elliptic"] = [rational_elliptic_check(j, dp) for j in (0, 1)]
    except CutError as exc:
        r.check(False, f"degeneration check failed at normal {f.normal}: {exc}")
    return out


def _fibration_report(P, D, f: FibrationData, tri, config: AnalysisConfig, label: str, r: _Report) -> dict:
    conds = _conditions(f, r)
    rep = {
        "normal": _vec(f.normal),
        "fiber_class": f.fiber_class.index,
        "fiber_vertices": _vecs(f.fiber_vertices),
        "top_points": len(f.top),
        "bottom_points": len(f.bottom),
        "conditions": conds,
        "vertices": _vertex_reports(P, D, f, tri, r),
    }
    char = candelas_characterization(P, f)
    r.check(char == all(conds.values()), f"characterization disagrees with conditions at normal {f.normal}")
    rep["candelas_characterization"] = char
    rep["candelas_font"] = _models(P, f, config)
    rep["kodaira"] = _kodaira(f, config, label)
    rep["cut"] = _cut(P, D, f, conds, r)
    return rep


# records ---------------------------------------------------------------------


def analyze(record: PolytopeRecord, config: AnalysisConfig = AnalysisConfig()) -> dict:
    r = _Report()
    rep: dict = {"schema": SCHEMA, "label": record.label, "vertices": _vecs(record.vertices)}
    try:
        P = IntegralPolytope(record.vertices)
    except PolytopeError as exc:
        rep["reflexive"] = na(str(exc))
        rep["violations"] = []
        return rep
    if P.dimension != 3:
        rep["reflexive"] = na(f"dimension {P.dimension}, expected 3")
        rep["violations"] = []
        return rep
    rep["reflexive"] = P.is_reflexive()
    if not rep["reflexive"]:
        rep["violations"] = []
        return rep
    D = P.dual()
    r.check(D.dual() == P, "dual of the dual differs from the input")
    rep["dual_vertices"] = _vecs(D.vertices)
    try:
        tri = maximal_subdivision(P)
    except TriangulationError as exc:
        r.check(False, f"maximal triangulation failed: {exc}")
        tri = None
    fibs = find_fibrations(P, config.fiber_class)
    rep["fibrations"] = [_fibration_report(P, D, f, tri, config, record.label, r) for f in fibs]
    rep["violations"] = r.violations
    return rep


def _safe_analyze(args) -> dict:
    record, config = args
    try:
        return analyze(record, config)
    except Exception as exc:  # isolate per-record failures
        return {
            "schema": SCHEMA,
            "label": record.label,
            "vertices": _vecs(record.vertices),
            "error": f"{type(exc).__name__}: {exc}",
            "violations": [f"analysis raised {type(exc).__name__}"],
        }


def condition_pattern(conds: dict) -> str:
    return "".join("T" if conds[k] else "F" for k in ("1)", "2)", "3)"))


def summarize(reports: Sequence[dict]) -> dict:
    patterns: Counter = Counter()
    classes: Counter = Counter()
    cuts: Counter = Counter()
    violations = 0
    errors = 0
    for rep in reports:
        violations += len(rep.get("violations", []))
        errors += "error" in rep
        for fib in rep.get("fibrations", []):
            patterns[condition_pattern(fib["conditions"])] += 1
            classes[str(fib["fiber_class"])] += 1
            c = fib["cut"]
            cuts["not applicable" if isinstance(c, str) else ("valid" if c["valid"] else "invalid")] += 1
    return {
        "records": len(reports),
        "reflexive": sum(rep.get("reflexive") is True for rep in reports),
        "fibrations": sum(patterns.values()),
        "condition_patterns": dict(sorted(patterns.items())),
        "fiber_classes": dict(sorted(classes.items(), key=lambda kv: int(kv[0]))),
        "cuts": dict(sorted(cuts.items())),
        "violations": violations,
        "errors": errors,
    }


def scan(records: Sequence[PolytopeRecord], config: AnalysisConfig = AnalysisConfig(), jobs: int = 1) -> tuple[list[dict], dict]:
    """Analyze every record; the output does not depend on ``jobs``."""
    work = [(rec, config) for rec in records]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(_safe_analyze, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        reports = [_safe_analyze(w) for w in work]
    return reports, summarize(reports)


def config_dict(config: AnalysisConfig) -> dict:
    return asdict(config)
