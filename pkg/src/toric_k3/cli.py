"""Command line: ``toric-k3 {analyze,scan,planar-classes,cut,weierstrass}``.

Exit codes: 0 success, 1 input or parse error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cox import anticanonical_monomials
from .io import ParseError, read_vertex_file
from .kodaira import DEFAULT_PRIME
from .pipeline import SCHEMA, AnalysisConfig, analyze, condition_pattern, config_dict, scan
from .planar import REFERENCE_VERTICES, PlanarClass, reference_polytope

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


def _config(args) -> AnalysisConfig:
    return AnalysisConfig(
        bound=args.bound,
        prime=args.prime,
        seed=args.seed,
        fiber_class=args.fiber_class,
        kodaira=not getattr(args, "no_kodaira", False),
        enumerate_semistable=getattr(args, "enumerate", False),
    )


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _flag(v) -> str:
    return "T" if v is True else "F" if v is False else "-"


def _na_or(value, fmt) -> str:
    return value if isinstance(value, str) else fmt(value)


def text_report(rep: dict) -> str:
    lines = [f"polytope {rep['label']}: vertices {rep['vertices']}"]
    if "error" in rep:
        lines.append(f"  error: {rep['error']}")
        return "\n".join(lines)
    if rep["reflexive"] is not True:
        lines.append(f"  reflexive: {rep['reflexive']}")
        return "\n".join(lines)
    lines.append(f"  dual vertices {rep['dual_vertices']}")
    for fib in rep["fibrations"]:
        c = fib["conditions"]
        lines.append(
            f"  fibration m_phi={fib['normal']} fibre class {fib['fiber_class']}: "
            f"1) {_flag(c['1)'])}  2) {_flag(c['2)'])}  3) {_flag(c['3)'])}"
        )
        for v in fib["vertices"]:
            sec = "section at infinity" if v["section_at_infinity"] else "no section at infinity"
            lines.append(
                f"    {v['name']} = {v['vertex']}: {sec}, flex {_flag(v['toric_flex'])}, "
                f"F.D_{v['name']} = {v['fiber_intersection']}, toric section {_flag(v['toric_section']) if not isinstance(v['toric_section'], str) else v['toric_section']}"
            )
        cf = fib["candelas_font"]
        if isinstance(cf, str):
            lines.append(f"    Candelas-Font: {cf}")
        else:
            for m in cf:
                if "model" in m:
                    lines.append(f"    Candelas-Font at {m['name']}: {m['model']}")
                    continue
                w = _na_or(m["weierstrass"], lambda d: f"(deg a, deg b) = ({d['deg_a']}, {d['deg_b']})")
                lines.append(f"    Candelas-Font at {m['name']}: L = {m['L']}, {w}")
        k = fib["kodaira"]
        lines.append("    Kodaira: " + _na_or(k, lambda d: " + ".join(f"{n} {t}" for t, n in d["fibers"].items())))
        cut = fib["cut"]
        lines.append("    cut: " + _na_or(cut, lambda d: ", ".join(f"{k} {_flag(v)}" for k, v in d["flags"].items())))
    if rep["violations"]:
        lines.append("  VIOLATIONS: " + "; ".join(rep["violations"]))
    return "\n".join(lines)


def _load(path: str):
    try:
        return read_vertex_file(path)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def _status(reports) -> int:
    return EXIT_INVARIANT if any(r.get("violations") for r in reports) else EXIT_OK


def cmd_analyze(args) -> int:
    records = _load(args.file)
    if records is None:
        return EXIT_INPUT
    config = _config(args)
    reports = [analyze(r, config) for r in records]
    if args.json:
        print(_dump({"schema": SCHEMA, "config": config_dict(config), "reports": reports}))
    else:
        print("\n\n".join(text_report(r) for r in reports))
    return _status(reports)


def cmd_scan(args) -> int:
    records = _load(args.file)
    if records is None:
        return EXIT_INPUT
    config = _config(args)
    reports, summary = scan(records, config, jobs=args.jobs)
    if args.json:
        print(_dump({"schema": SCHEMA, "config": config_dict(config), "summary": summary, "reports": reports}))
    else:
        for rep in reports:
            pats = " ".join(
                f"{f['fiber_class']}:{condition_pattern(f['conditions'])}" for f in rep.get("fibrations", [])
            )
            lines = f"{rep['label']}: " + (rep.get("error") or pats or "no fibrations")
            print(lines)
        print(_dump(summary))
    return _status(reports)


def cmd_planar(args) -> int:
    out = []
    for cls in (PlanarClass(i) for i in sorted(REFERENCE_VERTICES)):
        poly = reference_polytope(cls.index)
        eq = anticanonical_monomials(cls.reference_vertices, poly.dual(), cls.variable_names)
        out.append(
            {
                "index": cls.index,
                "dual_index": cls.dual_index,
                "vertices": [list(v) for v in cls.reference_vertices],
                "variables": list(cls.variable_names),
                "monomials": sorted(eq.monomial_strings()),
            }
        )
    if args.json:
        print(_dump({"schema": SCHEMA, "planar_classes": out}))
    else:
        for c in out:
            print(f"{c['index']:2d} (dual {c['dual_index']:2d}) vertices {c['vertices']}")
            print("   " + ", ".join(c["monomials"]))
    return EXIT_OK


def _per_fibration(args, key: str) -> int:
    records = _load(args.file)
    if records is None:
        return EXIT_INPUT
    config = _config(args)
    reports = [analyze(r, config) for r in records]
    out = [
        {
            "label": rep["label"],
            "fibrations": [
                {"normal": f["normal"], "fiber_class": f["fiber_class"], key: f[key], **({"kodaira": f["kodaira"]} if key != "cut" else {})}
                for f in rep.get("fibrations", [])
            ],
        }
        for rep in reports
    ]
    if args.json:
        print(_dump({"schema": SCHEMA, "results": out}))
    else:
        for rep in out:
            print(f"polytope {rep['label']}")
            for f in rep["fibrations"]:
                print(f"  m_phi={f['normal']} class {f['fiber_class']}: {json.dumps(f[key])}")
                if "kodaira" in f:
                    print(f"    kodaira: {json.dumps(f['kodaira'])}")
    return _status(reports)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-k3", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    cfg = argparse.ArgumentParser(add_help=False)
    cfg.add_argument("--bound", type=int, default=6, help="semistable enumeration bound (default 6)")
    cfg.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="sampling field size")
    cfg.add_argument("--seed", type=int, default=0)
    cfg.add_argument("--fiber-class", type=int, default=None, help="only fibrations with this fibre class")
    cfg.add_argument("--no-kodaira", action="store_true", help="skip Kodaira sampling")
    cfg.add_argument("--enumerate", action="store_true", help="enumerate semistable polytopes at each section")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common, cfg], help="full report for each polytope in FILE")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", parents=[common, cfg], help="batch analysis with a summary")
    p.add_argument("file")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("planar-classes", parents=[common], help="the 16 reference polygons and their curves")
    p.set_defaults(func=cmd_planar)

    p = sub.add_parser("cut", parents=[common, cfg], help="symplectic cut of each fibration")
    p.add_argument("file")
    p.set_defaults(func=lambda a: _per_fibration(a, "cut"))

    p = sub.add_parser("weierstrass", parents=[common, cfg], help="Candelas-Font models and Kodaira fibres")
    p.add_argument("file")
    p.set_defaults(func=lambda a: _per_fibration(a, "candelas_font"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
