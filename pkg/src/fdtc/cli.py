"""Command-line front end.

Problems are JSON files bundling a surface, a table of named curves,
mapping class words, foliation graphs and coefficient assignments;
subcommands dispatch to the computation modules and emit deterministic
reports (JSON or text).

Exit codes: 0 success, 2 problem-file/parse error, 3 computation
error, 4 every requested verdict came back inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import FdtcError, FoliationError, InconsistentDataError, WordError
from .surface import SurfaceSpec, standard_triangulation, denominator_bound
from . import curves as curves_mod
from .mcg import MappingClassWord
from . import fdtc as fdtc_mod
from . import foliation as fol_mod
from . import topology as top_mod

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_COMPUTATION = 3
EXIT_INCONCLUSIVE = 4


class ParseError(FdtcError):
    """Problem file is malformed; carries a location string."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


def _fraction(x, where):
    try:
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, dict):
            return Fraction(int(x["num"]), int(x["den"]))
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        raise ParseError("bad rational %r: %s" % (x,), where)
    raise ParseError("bad rational %r" % (x,), where)


@dataclass
class ProblemFile:
    """Validated contents of one problem file."""

    spec: SurfaceSpec
    curves: dict
    words: dict  # name -> generator list (raw JSON, compiled lazily)
    foliations: dict  # name -> FoliationGraph
    assignment: object  # CoefficientAssignment or None
    nt_type: str = None
    tight: bool = False
    _tri: object = None

    def triangulation(self):
        if self._tri is None:
            self._tri = standard_triangulation(self.spec)
        return self._tri

    def word(self, name: str) -> MappingClassWord:
        if name not in self.words:
            raise ParseError("unresolved word %r" % (name,), "words")
        return MappingClassWord.from_json(
            self.triangulation(), self.words[name], self.curves)

    def graph(self, name: str):
        if name not in self.foliations:
            raise ParseError("unresolved foliation graph %r" % (name,),
                             "foliations")
        return self.foliations[name]


def parse_problem(source) -> ProblemFile:
    """Parse and validate a problem file from a path, file object or
    JSON text."""
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and source.lstrip().startswith("{"):
        text = source
    else:
        try:
            with open(source) as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(str(exc), str(source))
    try:
        data = json.loads(text)
    except ValueError as exc:
        raise ParseError("invalid JSON: %s" % (exc,))
    if not isinstance(data, dict):
        raise ParseError("problem file must be a JSON object")

    if "surface" not in data:
        raise ParseError("missing field", "surface")
    try:
        spec = SurfaceSpec.from_json(data["surface"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("bad surface: %s" % (exc,), "surface")

    tri = standard_triangulation(spec)
    curves = {}
    for (name, weights) in data.get("curves", {}).items():
        if (not isinstance(weights, list)
                or len(weights) != tri.edge_count
                or not all(isinstance(w, int) and w >= 0 for w in weights)):
            raise ParseError("unresolved or malformed curve %r" % (name,),
                             "curves.%s" % name)
        try:
            c = curves_mod.NormalCoordinates(tri, tuple(weights))
            if not curves_mod.is_matching(c):
                raise ParseError("curve %r violates the matching conditions"
                                 % (name,), "curves.%s" % name)
        except FdtcError as exc:
            raise ParseError("bad curve %r: %s" % (name, exc),
                             "curves.%s" % name)
        curves[name] = tuple(weights)

    words = {}
    for (name, gens) in data.get("words", {}).items():
        if not isinstance(gens, list):
            raise ParseError("word %r must be a list" % (name,),
                             "words.%s" % name)
        for item in gens:
            if "twist" in item and item["twist"] not in curves:
                raise ParseError("unresolved curve %r" % (item["twist"],),
                                 "words.%s" % name)
        words[name] = gens

    foliations = {}
    for (name, g) in data.get("foliations", {}).items():
        try:
            foliations[name] = fol_mod.FoliationGraph.from_json(g)
        except FoliationError as exc:
            raise ParseError(str(exc), "foliations.%s" % name)

    assignment = None
    if "assignment" in data:
        a = data["assignment"]
        try:
            assignment = top_mod.CoefficientAssignment(
                {k: _fraction(v, "assignment") for (k, v)
                 in a["coefficients"].items()},
                a.get("mode", "monodromy"),
                bool(a.get("connected_boundary", False)),
            )
        except (KeyError, TypeError, InconsistentDataError) as exc:
            raise ParseError("bad assignment: %s" % (exc,), "assignment")

    nt_type = data.get("nt_type")
    if nt_type is not None and nt_type not in top_mod.NT_TYPES:
        raise ParseError("unknown nt_type %r" % (nt_type,), "nt_type")

    problem = ProblemFile(spec, curves, words, foliations, assignment,
                          nt_type, bool(data.get("tight", False)))
    problem._tri = tri
    # eagerly check that every word compiles against the generator checks
    for name in words:
        try:
            problem.word(name)
        except WordError as exc:
            raise ParseError("bad word %r: %s" % (name, exc),
                             "words.%s" % name)
    return problem


# -- report assembly ---------------------------------------------------------


@dataclass
class Report:
    task: str
    inputs: dict
    results: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"task": self.task, "inputs": self.inputs,
                "results": self.results, "warnings": self.warnings}


def emit_report(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_json(), sort_keys=True,
                           separators=(",", ": "), indent=1) + "\n").encode()
    lines = ["task: %s" % report.task]
    for (k, v) in sorted(report.inputs.items()):
        lines.append("  %s: %s" % (k, v))
    for r in report.results:
        lines.append("result:")
        for (k, v) in sorted(r.items()):
            lines.append("  %s: %s" % (k, v))
    for w in report.warnings:
        lines.append("warning: %s" % w)
    return ("\n".join(lines) + "\n").encode()


def _frac_str(x) -> str:
    return str(Fraction(x))


def _interval_json(iv) -> dict:
    out = iv.to_json()
    return out


def _fdtc_result_json(res) -> dict:
    return res.to_json()


# -- subcommand implementations ---------------------------------------------


def _pick_component(problem: ProblemFile, component) -> str:
    if component is not None:
        if component not in problem.triangulation().base_edge_of:
            raise ParseError("unknown boundary component %r" % (component,))
        return component
    return problem.spec.boundary_labels[0]


def _pick_word(problem: ProblemFile, name) -> str:
    if name is not None:
        return name
    if len(problem.words) == 1:
        return next(iter(problem.words))
    raise ParseError("problem has %d words; pick one with --word"
                     % len(problem.words))


def run(problem: ProblemFile, args) -> Report:
    """Execute one parsed subcommand against a parsed problem."""
    cmd = args.command
    if cmd == "fdtc":
        name = _pick_word(problem, args.word)
        C = _pick_component(problem, args.component)
        w = problem.word(name)
        report = Report("fdtc %s" % args.action,
                        {"word": name, "component": C})
        if args.action == "exact":
            res = fdtc_mod.fdtc_exact(w, C)
            report.results.append(_fdtc_result_json(res))
        elif args.action == "braid":
            res = fdtc_mod.braid_fdtc(w, C)
            report.results.append(_fdtc_result_json(res))
        elif args.action == "interval":
            for (i, iv) in enumerate(
                    fdtc_mod.translation_estimate(w, C, args.N)):
                report.results.append({"N": i + 1,
                                       "interval": _interval_json(iv)})
        elif args.action == "audit":
            w2 = problem.word(_pick_word(problem, args.word2))
            audit = fdtc_mod.quasimorphism_audit(w, w2, C)
            report.inputs["word2"] = args.word2 or args.word
            report.results.append({
                "c1": _frac_str(audit["c1"]),
                "c2": _frac_str(audit["c2"]),
                "c12": _frac_str(audit["c12"]),
                "defect": _frac_str(audit["defect"]),
                "defect_ok": audit["defect_ok"],
                "conjugation_ok": audit["conjugation_ok"],
            })
        return report

    if cmd == "foliation":
        g = problem.graph(_pick_graph(problem, args.graph))
        report = Report("foliation %s" % args.action,
                        {"graph": args.graph or next(iter(problem.foliations))})
        if args.action == "check":
            diags = fol_mod.validate_graph(g)
            counts = g.counts()
            result = {"ok": not diags, "diagnostics": diags,
                      "counts": counts.to_json(),
                      "euler_characteristic": counts.euler_characteristic()}
            if not g.surface.closed:
                result["self_linking"] = fol_mod.self_linking(counts)
            report.results.append(result)
        elif args.action == "bounds":
            points = args.points.split(",") if args.points else [
                v.id for v in g.elliptic_points]
            if args.aggregate:
                b = fol_mod.aggregate_bounds(points, g, args.mode)
            else:
                b = fol_mod.multi_point_bounds(points, g, args.mode)
            report.inputs["points"] = ",".join(points)
            report.inputs["mode"] = args.mode
            report.results.append(b.to_json())
            report.warnings.extend(b.assumptions)
        elif args.action == "otdisc":
            out = fol_mod.transverse_ot_disc_check(g)
            witness = fol_mod.bc_annulus_witness_check(g)
            if witness is not None:
                out = dict(out)
                out["bc_annulus_witness"] = witness["witness"]
            report.warnings.extend(out.pop("assumptions"))
            report.results.append(out)
        return report

    if cmd == "classify":
        if problem.assignment is None:
            raise ParseError("problem file has no coefficient assignment",
                             "assignment")
        a = problem.assignment
        nt_type = args.nt_type or problem.nt_type or "unknown"
        tight = args.tight or problem.tight
        report = Report("classify", {
            "mode": a.mode, "nt_type": nt_type, "tight": tight,
            "coefficients": {k: _frac_str(v)
                             for (k, v) in sorted(a.coefficients.items())},
        })
        verdicts = [top_mod.irreducibility_verdict(a),
                    top_mod.atoroidality_verdict(a, nt_type, tight),
                    top_mod.geometry_verdict(a, nt_type)]
        if a.mode == "monodromy":
            verdicts.append(top_mod.stabilization_obstruction(a))
        report.results.extend(v.to_json() for v in verdicts)
        if all(v.inconclusive for v in verdicts):
            report.warnings.append("all criteria inconclusive")
        return report

    if cmd == "surface":
        spec = problem.spec
        folded = spec.fold_punctures()
        db = denominator_bound(folded)
        report = Report("surface info", {})
        info = {
            "genus": spec.genus,
            "boundary": list(spec.boundary_labels),
            "punctures": spec.puncture_count,
            "euler_characteristic": spec.euler_characteristic,
            "denominator_bound": db.value,
            "denominator_bound_degenerate": db.degenerate,
            "key_lemma_power": db.value * (db.value - 1) + 1,
            "edges": problem.triangulation().edge_count,
            "named_curves": sorted(problem.curves),
            "words": sorted(problem.words),
        }
        report.results.append(info)
        return report

    raise ParseError("unknown command %r" % (cmd,))


def _pick_graph(problem: ProblemFile, name) -> str:
    if name is not None:
        return name
    if len(problem.foliations) == 1:
        return next(iter(problem.foliations))
    raise ParseError("problem has %d foliation graphs; pick one with --graph"
                     % len(problem.foliations))


# -- argument plumbing -------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="fdtc",
        description="fractional Dehn twist coefficients, foliation "
                    "certificates and topology criteria")
    top.add_argument("--format", choices=("json", "text"), default="json")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fdtc", help="twist coefficient computations")
    p.add_argument("action",
                   choices=("exact", "interval", "braid", "audit"))
    p.add_argument("problem")
    p.add_argument("--word")
    p.add_argument("--word2")
    p.add_argument("--component")
    p.add_argument("--N", type=int, default=10,
                   help="largest power for interval estimates")

    p = sub.add_parser("foliation", help="foliation graph checks and bounds")
    p.add_argument("action", choices=("check", "bounds", "otdisc"))
    p.add_argument("problem")
    p.add_argument("--graph")
    p.add_argument("--points")
    p.add_argument("--mode", choices=("monodromy", "braid"),
                   default="monodromy")
    p.add_argument("--aggregate", action="store_true",
                   help="use the averaged same-sign estimate")

    p = sub.add_parser("classify", help="topology verdicts from coefficients")
    p.add_argument("problem")
    p.add_argument("--nt-type", dest="nt_type", choices=top_mod.NT_TYPES)
    p.add_argument("--tight", action="store_true")

    p = sub.add_parser("surface", help="surface parameters")
    p.add_argument("action", choices=("info",))
    p.add_argument("problem")
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        problem = parse_problem(args.problem)
    except ParseError as exc:
        print("parse error: %s" % (exc,), file=sys.stderr)
        return EXIT_PARSE
    try:
        report = run(problem, args)
    except ParseError as exc:
        print("parse error: %s" % (exc,), file=sys.stderr)
        return EXIT_PARSE
    except FdtcError as exc:
        print("computation error: %s" % (exc,), file=sys.stderr)
        return EXIT_COMPUTATION
    sys.stdout.buffer.write(emit_report(report, args.format))
    sys.stdout.flush()
    if args.command == "classify" and "all criteria inconclusive" in report.warnings:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
