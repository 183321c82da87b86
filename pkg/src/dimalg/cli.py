"""Command-line driver: ``dimalg check | bracket | reduce | product | tensor``.

Exit codes are 0 when everything verified, 1 on a mathematical failure
(a counterexample or witness is reported) and 2 on operational errors
such as a missing file, a parse error or an unresolved name.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Any, Sequence

from . import __version__
from .algebra_ops import ReductionData, product_casimir, product_jacobi, product_poly_poisson, reduce, tensor_heterogeneous
from .bracket import BracketSpec, evaluate, to_jacobi, verify_poisson, verify_symbols
from .dsl import (
    BracketDecl,
    Document,
    ElementDecl,
    IdealDecl,
    ParseError,
    ProductDecl,
    ReductionDecl,
    parse,
    parse_element,
    render,
    spec_document,
)
from .errors import DimalgError, WitnessError
from .power_ring import CoordIdeal, DimElement
from .sampling import DEFAULT_SEED

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "schema", "run_report.json")


class UsageError(Exception):
    """Operational problem: bad arguments, unresolved names, unreadable files."""


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, DimElement):
        return x.render()
    if x is None or isinstance(x, (str, int, float, bool, dict)):
        return x
    return str(x)


class Report:
    def __init__(self, command: str, inputs: dict[str, Any], timing: bool):
        self.command = command
        self.inputs = inputs
        self.status = "pass"
        self.details: dict[str, Any] = {"counterexamples": []}
        self.timing = {} if timing else None
        self._t0 = time.perf_counter()

    def fail(self, counterexample: dict[str, Any]):
        self.status = "fail"
        self.details["counterexamples"].append(counterexample)

    def add_checks(self, key: str, report):
        self.details[key] = [c.to_dict() for c in report.checks]
        for c in report.checks:
            if not c.passed:
                self.fail(dict(c.counterexample or {}, check=c.name))

    def lap(self, label: str):
        if self.timing is not None:
            self.timing[label] = round(time.perf_counter() - self._t0, 6)

    def error(self, kind: str, message: str, **extra):
        self.status = "error"
        self.details["error"] = dict({"type": kind, "message": message}, **extra)

    def to_dict(self) -> dict[str, Any]:
        d = {"command": self.command, "inputs": self.inputs, "status": self.status, "details": self.details}
        if self.timing is not None:
            self.lap("total")
            d["timing"] = self.timing
        return d

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "error": EXIT_ERROR}[self.status]


# -- helpers --------------------------------------------------------------------


def load(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror or err}") from None
    return parse(source)


def lookup(doc: Document, name: str, kind):
    try:
        return doc.get(name, kind)
    except KeyError as err:
        raise UsageError(err.args[0]) from None


def resolve_element(doc: Document, text: str, spec: BracketSpec) -> DimElement:
    """An element declaration name, or an inline expression on the spec's model."""
    try:
        decl = doc.get(text)
    except KeyError:
        decl = None
    if isinstance(decl, ElementDecl):
        if decl.element.model != spec.model:
            raise UsageError(f"element {text!r} lives on model {decl.model_name!r}, not on the bracket's model")
        return decl.element
    if decl is not None:
        raise UsageError(f"{text!r} names a declaration that is not an element")
    return parse_element(text, spec.model)


def emit(report: Report, spec: BracketSpec, name: str, model_name: str, out: str | None, seed: int, samples: int) -> str:
    """Render the spec, re-parse it, and verify the re-parsed copy."""
    text = render(spec_document(spec, name, model_name))
    reparsed = parse(text).get(name, BracketDecl).spec
    if reparsed != spec:
        raise DimalgError("emitted spec does not re-parse to the same bracket")
    report.details["emitted"] = text
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        report.details["out"] = os.path.basename(out)
    report.lap("construct")
    report.add_checks("checks", verify_poisson(reparsed, seed=seed, samples=samples))
    report.lap("verify")
    return text


def witness_failure(report: Report, err: WitnessError):
    report.fail({"error": type(err).__name__, "message": str(err), "witness": _jsonable(err.witness)})


# -- commands -------------------------------------------------------------------


def cmd_check(args, report: Report):
    doc = load(args.file)
    spec = lookup(doc, args.bracket, BracketDecl).spec
    report.lap("parse")
    report.add_checks("checks", verify_poisson(spec, seed=args.seed, samples=args.samples))
    J = to_jacobi(spec)
    if J is not None:
        report.add_checks("symbol_checks", verify_symbols(J))
    report.lap("verify")


def cmd_bracket(args, report: Report):
    doc = load(args.file)
    spec = lookup(doc, args.bracket, BracketDecl).spec
    a = resolve_element(doc, args.a, spec)
    b = resolve_element(doc, args.b, spec)
    value = evaluate(spec, a, b)
    report.details["result"] = value.render()
    report.details["dim"] = list(value.dim.entries)


def cmd_reduce(args, report: Report):
    doc = load(args.file)
    if args.reduction:
        if args.bracket or args.ideal or args.survivors is not None:
            raise UsageError("--reduction excludes --bracket, --ideal and --survivors")
        rdecl = lookup(doc, args.reduction, ReductionDecl)
        bname, iname, survivors, name = rdecl.bracket, rdecl.ideal, rdecl.keep, rdecl.name
    else:
        if not (args.bracket and args.ideal):
            raise UsageError("reduce needs --reduction, or --bracket and --ideal")
        bname, iname = args.bracket, args.ideal
        survivors = tuple(s.strip() for s in (args.survivors or "").split(",") if s.strip())
        name = f"{bname}_red"
    bdecl = lookup(doc, bname, BracketDecl)
    ideal: CoordIdeal = lookup(doc, iname, IdealDecl).ideal
    report.lap("parse")
    try:
        reduced = reduce(bdecl.spec, ReductionData(ideal, survivors))
    except WitnessError as err:
        return witness_failure(report, err)
    emit(report, reduced, name, f"{bdecl.model_name}_red", args.out, args.seed, args.samples)


_PRODUCTS = {"jacobi": product_jacobi, "poly_poisson": product_poly_poisson, "tensor": tensor_heterogeneous}


def _product_args(args, doc: Document, kind: str | None):
    if args.product:
        if args.bracket:
            raise UsageError("--product excludes --bracket")
        pdecl = lookup(doc, args.product, ProductDecl)
        if kind is not None and pdecl.kind != kind:
            raise UsageError(f"product {args.product!r} has kind {pdecl.kind}, not {kind}")
        kind = pdecl.kind
        if kind == "casimir":
            return pdecl.name, kind, [pdecl.args[0], pdecl.args[2]], [pdecl.args[1], pdecl.args[3]]
        return pdecl.name, kind, list(pdecl.args), None
    if not args.bracket or len(args.bracket) != 2:
        raise UsageError("give exactly two --bracket names, or --product")
    kind = kind or args.kind
    casimirs = None
    if kind == "casimir":
        if not (args.casimir_left and args.casimir_right):
            raise UsageError("the casimir product needs --casimir-left and --casimir-right")
        casimirs = [args.casimir_left, args.casimir_right]
    elif args.casimir_left or args.casimir_right:
        raise UsageError("--casimir-left/right only apply to --kind casimir")
    left, right = args.bracket
    return f"{left}_{kind}_{right}", kind, [left, right], casimirs


def _run_product(args, report: Report, kind: str | None):
    doc = load(args.file)
    name, kind, brackets, casimirs = _product_args(args, doc, kind)
    report.inputs["kind"] = kind
    specs = [lookup(doc, b, BracketDecl).spec for b in brackets]
    report.lap("parse")
    try:
        if kind == "casimir":
            ua = resolve_element(doc, casimirs[0], specs[0])
            ub = resolve_element(doc, casimirs[1], specs[1])
            spec = product_casimir(specs[0], ua, specs[1], ub)
        else:
            spec = _PRODUCTS[kind](specs[0], specs[1])
    except WitnessError as err:
        return witness_failure(report, err)
    emit(report, spec, name, f"M_{name}", args.out, args.seed, args.samples)


def cmd_product(args, report: Report):
    _run_product(args, report, None)


def cmd_tensor(args, report: Report):
    _run_product(args, report, "tensor")


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="a .dimalg file")
    common.add_argument("--json", action="store_true", help="print the run report as JSON")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"sweep seed (default {DEFAULT_SEED})")
    common.add_argument("--samples", type=int, default=200, help="random samples per check (default 200)")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")

    parser = argparse.ArgumentParser(prog="dimalg", description="Dimensioned Poisson algebra toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="verify a bracket")
    p.add_argument("--bracket", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bracket", parents=[common], help="evaluate {A, B}")
    p.add_argument("--bracket", required=True)
    p.add_argument("a", help="element name or inline expression")
    p.add_argument("b", help="element name or inline expression")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("reduce", parents=[common], help="coisotropic reduction")
    p.add_argument("--reduction")
    p.add_argument("--bracket")
    p.add_argument("--ideal")
    p.add_argument("--survivors", help="comma-separated surviving variables")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    for name, kinds, fn in (
        ("product", ("jacobi", "poly_poisson", "casimir", "tensor"), cmd_product),
        ("tensor", None, cmd_tensor),
    ):
        p = sub.add_parser(name, parents=[common], help=f"{name} of two brackets")
        p.add_argument("--bracket", action="append", help="give twice: left then right")
        p.add_argument("--product", help="a product declaration in the file")
        if kinds:
            p.add_argument("--kind", choices=kinds, default="jacobi")
            p.add_argument("--casimir-left")
            p.add_argument("--casimir-right")
        else:
            p.set_defaults(casimir_left=None, casimir_right=None)
        p.add_argument("--out")
        p.set_defaults(func=fn)
    return parser


def _inputs(args) -> dict[str, Any]:
    skip = {"func", "json", "timing", "command", "out"}
    inputs = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    inputs["file"] = os.path.basename(args.file)
    return inputs


def _print_human(report: Report, out):
    d = report.details
    if "result" in d:
        print(d["result"], file=out)
        return
    for key in ("checks", "symbol_checks"):
        for c in d.get(key, []):
            mark = "PASS" if c["passed"] else "FAIL"
            print(f"{mark} {c['name']} ({c['count']} cases)", file=out)
    for cx in d["counterexamples"]:
        print("counterexample: " + json.dumps(cx, sort_keys=True), file=out)
    if "emitted" in d and "out" not in d:
        print(d["emitted"], end="", file=out)
    print(f"status: {report.status}", file=out)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_PASS
    report = Report(args.command, _inputs(args), args.timing)
    try:
        args.func(args, report)
    except ParseError as err:
        report.error("ParseError", "parse failed", diagnostics=[d.to_dict() for d in err.diagnostics])
        for diag in err.diagnostics:
            print(f"{args.file}:{diag}", file=sys.stderr)
    except (UsageError, DimalgError, ValueError, KeyError) as err:
        message = str(err.args[0]) if isinstance(err, KeyError) and err.args else str(err)
        report.error(type(err).__name__, message)
        print(f"dimalg: {message}", file=sys.stderr)
    if args.json:
        print(json.dumps(report.to_dict(), sort_keys=True, indent=2))
    else:
        _print_human(report, sys.stdout)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
