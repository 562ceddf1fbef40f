"""``surfcalc`` command line.

Every command builds a plain report dict; ``--json`` prints it as JSON with
rationals as ``"p/q"`` strings, otherwise it is rendered as aligned text.
Exit codes: 0 ok, 1 a verification failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import classify, dualgraph, surface
from .classify import ConstructionParams
from .dualgraph import WeightedDualGraph
from .errors import ParseError, SurfcalcError
from .exact import determinant, is_negative_definite
from .suite import paper_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _load_json(path) -> object:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def parse_graph(path) -> WeightedDualGraph:
    """Read a dual graph file; errors name the file and the offending field."""
    obj = _load_json(path)
    try:
        return WeightedDualGraph.from_dict(obj)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def parse_attachment(spec: str) -> dict[str, int]:
    out = {}
    for item in filter(None, (s.strip() for s in spec.split(","))):
        vid, sep, val = item.partition("=")
        if not sep:
            vid, val = item, "1"
        try:
            out[vid.strip()] = int(val)
        except ValueError:
            raise ParseError(f"--attach: {item!r} is not id=integer") from None
    if not out:
        raise ParseError("--attach: empty attachment")
    return out


def jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    return str(obj)


# ----------------------------------------------------------------------------
# commands: each returns (exit code, report)

def cmd_graph_analyze(args):
    g = parse_graph(args.path)
    M = dualgraph.intersection_matrix(g)
    report = {"vertices": g.ids, "det": determinant(M),
              "negative_definite": is_negative_definite(M)}
    if not report["negative_definite"] or not g.is_connected():
        report["note"] = "not a resolution graph: local invariants skipped"
        return EXIT_OK, report
    z = dualgraph.fundamental_cycle(g)
    report["fundamental_cycle"] = z
    report["fundamental_cycle_min"] = min(z.values())
    report["rational"] = dualgraph.is_rational(g)
    if all(v.genus == 0 for v in g.vertices):
        cg = dualgraph.local_class_group(g)
        report["discrepancy"] = dualgraph.discrepancy_cycle(g)
        report["KG"] = dualgraph.canonical_pairing(g)
        report["index"] = dualgraph.local_index(g)
        report["class_group"] = list(cg.divisors)
        report["class_group_order"] = cg.order
        report["klt"] = dualgraph.is_klt(g)
    return EXIT_OK, report


def cmd_graph_recognize(args):
    g = parse_graph(args.path)
    t = dualgraph.recognize(g)
    report = {"type": str(t), "kind": type(t).__name__}
    if isinstance(t, dualgraph.Cyclic):
        report.update(n=t.n, q=t.q, q_inverse=t.q_inverse,
                      admissible=dualgraph.is_admissible_cyclic(t))
    return EXIT_OK, report


def cmd_lct(args):
    g = parse_graph(args.path)
    att = parse_attachment(args.attach)
    return EXIT_OK, {"attach": att, "lct": dualgraph.lct_local(g, att)}


def cmd_surface_run(args):
    x = surface.run_script(_load_json(args.path))
    m = x.ambient
    points = []
    for p in x.points:
        points.append({"curves": list(p.curves), "type": str(dualgraph.recognize(p.graph))
                       if p.minimal else "non-minimal configuration",
                       "index": dualgraph.local_index(p.graph)})
    report = {"rho": m.picard_number(), "curves": m.curve_ids, "points": points,
              "carried": [str(dualgraph.recognize(g)) for g in m.carried],
              "r": x.global_index(), "KK": surface.pair(x, m.K, m.K)}
    if m.is_unimodular():
        try:
            cg = surface.class_group(x)
            report["class_group"] = {"free_rank": cg.free_rank, "torsion": list(cg.torsion),
                                     "anticanonical_generated": cg.anticanonical_generated}
        except SurfcalcError as exc:
            report["class_group"] = f"unavailable: {exc}"
    return EXIT_OK, report


def cmd_classify_screen(args):
    rows = [{"candidate": str(r.candidate[0]), "KG": r.KG, "r": r.r, "rho": r.rho,
             "integral": r.integral} for r in classify.screen_forks()]
    survivors = [row["candidate"] for row in rows if row["integral"]]
    return EXIT_OK, {"screen": rows, "survivors": survivors}


def cmd_classify_attach(args):
    g = parse_graph(args.path)
    rows = [{"vertex": vid, "coefficients": coeffs, "passes": ok}
            for vid, coeffs, ok in classify.attachment_enumeration(g)]
    return EXIT_OK, {"attachments": rows,
                     "passing": [r["vertex"] for r in rows if r["passes"]]}


def cmd_construct(args):
    choices = tuple(c for c in (args.choices or "").split(",") if c)
    p = ConstructionParams(args.kind, args.m, choices)
    x = classify.construct_X(p)
    rep = classify.verify_construction(x, classify.expected_relation(p))
    report = {"kind": p.kind, "m": p.m, "choices": list(p.choices),
              "types": [str(t) for t in rep.types], "KK": rep.KK, "r": rep.r,
              "noether": rep.noether, "anticanonical_generated": rep.anticanonical_generated,
              "relation": rep.relation, "failures": rep.failures, "passed": rep.passed}
    return (EXIT_OK if rep.passed else EXIT_FAIL), report


def cmd_fe_check(args):
    v = classify.fe_check(args.e)
    rows = [{"M1": list(a), "M2": list(b), "det": d} for a, b, d in v.candidates]
    return EXIT_OK, {"e": v.e, "candidates": rows,
                     "no_generating_decomposition": v.no_generating_decomposition}


def cmd_verify_paper(args):
    rep = paper_suite()
    rows = [{"name": c.name, "passed": c.passed, "computed": c.computed,
             "expected": c.expected} for c in rep.checks]
    return (EXIT_OK if rep.passed else EXIT_FAIL), {"checks": rows, "passed": rep.passed}


# ----------------------------------------------------------------------------
# rendering

class _Style:
    def __init__(self, enabled: bool):
        self.enabled = enabled

    def __call__(self, text: str, code: str) -> str:
        return f"\033[{code}m{text}\033[0m" if self.enabled else text


def use_color(stream) -> bool:
    return os.environ.get("SURFCALC_COLOR", "1") != "0" and stream.isatty()


def _fmt(v) -> str:
    j = jsonable(v)
    if isinstance(j, dict):
        return "{" + _fields(j) + "}"
    if isinstance(j, list):
        return "[" + ", ".join(_fmt(x) for x in j) + "]"
    if isinstance(j, bool):
        return str(j).lower()
    return str(j)


def _fields(d: dict) -> str:
    return ", ".join(f"{k}={_fmt(x)}" for k, x in d.items())


def render_text(report: dict, style: _Style) -> str:
    lines = []
    if "checks" in report:  # verify-paper
        for c in report["checks"]:
            tag = style("PASS", "32") if c["passed"] else style("FAIL", "31")
            lines.append(f"{tag}  {c['name']}")
            if not c["passed"]:
                lines.append(f"      computed: {_fmt(c['computed'])}")
                lines.append(f"      expected: {_fmt(c['expected'])}")
        return "\n".join(lines)
    width = max((len(k) for k in report), default=0)
    for key, value in report.items():
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            lines.append(style(f"{key}:", "1"))
            lines.extend(f"  {_fields(jsonable(v))}" for v in value)
        else:
            lines.append(f"{key.ljust(width)}  {_fmt(value)}")
    return "\n".join(lines)


# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit a machine-readable JSON report")

    ap = argparse.ArgumentParser(prog="surfcalc", parents=[common],
                                 description="Exact invariants of surface singularities "
                                             "and log del Pezzo lattice models.")
    sub = ap.add_subparsers(dest="command", required=True)

    graph = sub.add_parser("graph", help="dual graph tools").add_subparsers(
        dest="graph_command", required=True)
    p = graph.add_parser("analyze", parents=[common], help="local invariants of a graph")
    p.add_argument("path")
    p.set_defaults(func=cmd_graph_analyze)
    p = graph.add_parser("recognize", parents=[common], help="singularity type of a graph")
    p.add_argument("path")
    p.set_defaults(func=cmd_graph_recognize)

    p = sub.add_parser("lct", parents=[common], help="local log canonical threshold")
    p.add_argument("path")
    p.add_argument("--attach", required=True, metavar="ID=N,...",
                   help="intersection numbers of the curve with the exceptional curves")
    p.set_defaults(func=cmd_lct)

    surf = sub.add_parser("surface", help="blowup scripts").add_subparsers(
        dest="surface_command", required=True)
    p = surf.add_parser("run", parents=[common], help="execute a blowup script")
    p.add_argument("path")
    p.set_defaults(func=cmd_surface_run)

    cls = sub.add_parser("classify", help="classification computations").add_subparsers(
        dest="classify_command", required=True)
    p = cls.add_parser("screen", parents=[common], help="Picard-number screen of the forks")
    p.set_defaults(func=cmd_classify_screen)
    p = cls.add_parser("attach", parents=[common], help="unit attachment at each vertex")
    p.add_argument("path")
    p.set_defaults(func=cmd_classify_attach)

    p = sub.add_parser("construct", parents=[common], help="build and verify a family member")
    p.add_argument("--kind", required=True, choices=["node", "cusp"])
    p.add_argument("--m", required=True, type=int)
    p.add_argument("--choices", default="", help="comma separated, each prev or other")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("fe-check", parents=[common], help="anticanonical splittings on F_e")
    p.add_argument("e", type=int)
    p.set_defaults(func=cmd_fe_check)

    p = sub.add_parser("verify-paper", parents=[common], help="run the full verification suite")
    p.set_defaults(func=cmd_verify_paper)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return EXIT_INPUT if exc.code else EXIT_OK
    as_json = getattr(args, "json", False)
    try:
        code, report = args.func(args)
    except SurfcalcError as exc:
        if as_json:
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if as_json:
        print(json.dumps(jsonable(report), indent=2))
    else:
        print(render_text(report, _Style(use_color(sys.stdout))))
    return code


if __name__ == "__main__":
    sys.exit(main())
