"""Command-line surface: validate, classify, span, dualize, straighten,
unstraighten, mate, monoidal-mate, selftest.

Exit codes: 0 all checks pass, 1 a mathematical check failed (witness
printed), 2 parse/usage error, 3 search budget exceeded."""

from __future__ import annotations

import argparse
import json
import sys

from . import documents
from .errors import BudgetExceeded, ParseError, SpanDualError
from .fincat import Budget, DEFAULT_BUDGET, equivalent_over_base
from .fibrations import classify as classify_fibration
from .fibrations import check_factor_criterion
from .dualize import (
    classify_dual_edge,
    dual_cc,
    double_dual_check,
    fiber_preservation_check,
    straightening_compatibility_check,
)
from .grothendieck import straighten_cc, straighten_ortho, unstraighten_cc, unstraighten_ct, unstraighten_ortho
from .mates import mate_of_lax, mate_via_dualization
from .monoidal import doctrinal_mate, doctrinal_round_trip
from .triplespan import span_homotopy_category, validate_triple


class _Report:
    def __init__(self, output: str):
        self.output = output
        self.lines = []
        self.data = {}

    def add(self, key: str, value):
        self.data[key] = value
        if isinstance(value, dict):
            for sub, v in sorted(value.items()):
                self.lines.append(f"{key}.{sub} = {v}")
        else:
            self.lines.append(f"{key} = {value}")

    def emit(self) -> str:
        if self.output == "json":
            return json.dumps(self.data, indent=2, sort_keys=True, default=str)
        return "\n".join(self.lines)


def _load(path: str) -> documents.Document:
    with open(path, "r", encoding="utf-8") as handle:
        return documents.parse(handle.read())


def _cmd_validate(args, report) -> int:
    doc = _load(args.file)
    report.add("kind", doc.kind)
    if doc.kind == "category":
        doc.payload.validate()
        report.add("valid", True)
        return 0
    if doc.kind == "triple":
        doc.payload.carrier.validate()
        ok, witnesses = validate_triple(doc.payload)
        report.add("valid", ok)
        if not ok:
            report.add("witnesses", [str(w) for w in witnesses[:5]])
            return 1
        return 0
    if doc.kind == "fibration":
        doc.payload.total.validate()
        doc.payload.proj.validate()
        report.add("valid", True)
        return 0
    if doc.kind == "diagram":
        doc.payload.validate()
        report.add("valid", True)
        return 0
    if doc.kind == "adjunction":
        doc.payload.validate()
        report.add("valid", True)
        return 0
    if doc.kind == "transformation":
        transformation, adjunctions = doc.payload
        transformation.validate()
        for adj in adjunctions.values():
            adj.validate()
        report.add("valid", True)
        return 0
    source, target, lax, adjunction = doc.payload
    source.validate()
    if target is not None:
        target.validate()
    if lax is not None:
        lax.validate()
    if adjunction is not None:
        adjunction.validate()
    report.add("valid", True)
    return 0


def _cmd_classify(args, report) -> int:
    doc = _load(args.file)
    if doc.kind != "fibration":
        raise ParseError("classify expects a fibration document")
    fib_report = classify_fibration(doc.payload)
    report.add("classification", fib_report.as_dict())
    report.add("factor_criterion", check_factor_criterion(doc.payload))
    report.add("witnesses", {k: str(v) for k, v in sorted(fib_report.witnesses.items())})
    return 0


def _cmd_span(args, report) -> int:
    doc = _load(args.file)
    if doc.kind != "triple":
        raise ParseError("span expects a triple document")
    ok, witnesses = validate_triple(doc.payload)
    if not ok:
        report.add("valid", False)
        report.add("witnesses", [str(w) for w in witnesses[:5]])
        return 1
    span_cat = span_homotopy_category(doc.payload, check=False)
    report.add("objects", len(span_cat.fincat.objects))
    report.add("morphisms", len(span_cat.fincat.morphisms))
    report.add("rigid", span_cat.rigid)
    report.add("category", documents.serialize_category(span_cat.fincat))
    report.add(
        "tabulation",
        {
            name: f"{sp.source} <- {sp.apex} -> {sp.target} ({sp.left}, {sp.right})"
            for name, sp in sorted(span_cat.spans.items())
        },
    )
    return 0


def _cmd_dualize(args, report) -> int:
    doc = _load(args.file)
    if doc.kind != "fibration":
        raise ParseError("dualize expects a fibration document")
    dual = dual_cc(doc.payload)
    report.add("dual", documents.serialize_fibration(dual.fibred))
    report.add(
        "edge_table",
        {
            m: ",".join(classify_dual_edge(dual, m)["labels"]) or "unclassified"
            for m in sorted(dual.total.morphisms)
        },
    )
    ok, witness = fiber_preservation_check(doc.payload, dual)
    report.add("fiber_preservation", ok)
    if not ok:
        report.add("fiber_witness", str(witness))
        return 1
    return 0


def _cmd_straighten(args, report) -> int:
    doc = _load(args.file)
    if doc.kind != "fibration":
        raise ParseError("straighten expects a fibration document")
    if args.mode == "ortho":
        diagram = straighten_ortho(doc.payload)
    else:
        diagram = straighten_cc(doc.payload.proj)
    report.add("diagram", documents.serialize_diagram(diagram))
    return 0


def _cmd_unstraighten(args, report) -> int:
    doc = _load(args.file)
    if doc.kind != "diagram":
        raise ParseError("unstraighten expects a diagram document")
    if args.mode == "ortho":
        raise ParseError("ortho unstraightening needs bases; use a fibration round trip instead")
    if args.mode == "ct":
        result = unstraighten_ct(doc.payload)
    else:
        result = unstraighten_cc(doc.payload)
    report.add("total", documents.serialize_category(result.total))
    report.add("projection", {x: result.proj.object_map[x] for x in sorted(result.total.objects)})
    return 0


def _cmd_mate(args, report) -> int:
    doc = _load(args.file)
    if doc.kind != "transformation":
        raise ParseError("mate expects a transformation document")
    transformation, adjunctions = doc.payload
    if args.search_adjoints:
        from .mates import find_left_adjoint

        adjunctions = {}
        for a in transformation.base.objects:
            adj = find_left_adjoint(transformation.components[a])
            if adj is None:
                report.add("missing_left_adjoint", a)
                return 1
            adjunctions[a] = adj
    lam = mate_of_lax(transformation, adjunctions)
    report.add(
        "mate_cells",
        {
            f: dict(sorted(lam.cells[f].components.items()))
            for f in sorted(transformation.base.morphisms)
        },
    )
    lam2 = mate_via_dualization(transformation, adjunctions)
    agree = all(
        lam.cells[f].components == lam2.cells[f].components
        for f in transformation.base.morphisms
    )
    report.add("dualization_route_agrees", agree)
    return 0 if agree else 1


def _cmd_monoidal_mate(args, report) -> int:
    doc = _load(args.file)
    if doc.kind != "monoidal":
        raise ParseError("monoidal-mate expects a monoidal document")
    source, target, lax, adjunction = doc.payload
    if lax is None:
        raise ParseError("monoidal-mate needs FUNCTOR/MU/MU0 data")
    if adjunction is None:
        from .mates import find_left_adjoint

        adjunction = find_left_adjoint(lax.underlying)
        if adjunction is None:
            report.add("missing_left_adjoint", True)
            return 1
    oplax = doctrinal_mate(lax, adjunction)
    report.add(
        "delta",
        {f"{x},{y}": m for (x, y), m in sorted(oplax.delta.items())},
    )
    report.add("delta0", oplax.delta0)
    ok = doctrinal_round_trip(lax, adjunction)
    report.add("round_trip", ok)
    return 0 if ok else 1


def _cmd_selftest(args, report) -> int:
    from .acceptance import run_all

    results = run_all(seed=args.seed, quick=args.quick)
    failures = 0
    for name, passed, detail in results:
        status = "PASS" if passed else "FAIL"
        report.add(name, f"{status} ({detail})")
        if not passed:
            failures += 1
    report.add("total", f"{len(results) - failures}/{len(results)} criteria passed")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spandual",
        description="finite-category engine: fibration taxonomy, span dualization, "
        "straightening, mates",
    )
    parser.add_argument("--output", choices=("text", "json"), default="text")
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in ("validate", "classify", "span", "dualize"):
        p = sub.add_parser(verb)
        p.add_argument("file")
    p = sub.add_parser("straighten")
    p.add_argument("file")
    p.add_argument("--mode", choices=("cc", "ortho"), default="cc")
    p = sub.add_parser("unstraighten")
    p.add_argument("file")
    p.add_argument("--mode", choices=("cc", "ct", "ortho"), default="cc")
    p = sub.add_parser("mate")
    p.add_argument("file")
    p.add_argument("--search-adjoints", action="store_true")
    p = sub.add_parser("monoidal-mate")
    p.add_argument("file")
    p = sub.add_parser("selftest")
    p.add_argument("--quick", action="store_true", help="run reduced corpora")
    return parser


_HANDLERS = {
    "validate": _cmd_validate,
    "classify": _cmd_classify,
    "span": _cmd_span,
    "dualize": _cmd_dualize,
    "straighten": _cmd_straighten,
    "unstraighten": _cmd_unstraighten,
    "mate": _cmd_mate,
    "monoidal-mate": _cmd_monoidal_mate,
    "selftest": _cmd_selftest,
}


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    report = _Report(args.output)
    try:
        code = _HANDLERS[args.verb](args, report)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"cannot read file: {exc}", file=sys.stderr)
        return 2
    except SpanDualError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    print(report.emit())
    return code


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
