"""Command-line front end.

Exit codes: 0 success, 1 negative mathematical answer, 2 input error,
3 budget exhaustion or an undecided (UNKNOWN) verdict.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import adjacency as adj
from .catalog import enumerate_types, named_type
from .certificates import certificate_json, domination_json, load_certificate, verify_certificate
from .diagram import OrderedDiagram, enumerate_diagrams, validate_diagram
from .errors import EnriquesError, ResourceLimitError
from .fileformat import ParseError, parse_diagram, parse_raw, serialize_diagram
from .render import render
from .weights import (
    degree,
    excesses,
    invariants,
    is_consistent,
    is_type,
    unload,
    values_from_multiplicities,
)

OK, NEGATIVE, INPUT_ERROR, EXHAUSTED = 0, 1, 2, 3


class _InputError(Exception):
    pass


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _InputError(f"{path}: {exc.strerror}") from exc


def _load(path, weighted=None):
    try:
        obj = parse_diagram(_read(path), weighted=weighted)
    except ParseError as exc:
        raise _InputError(f"{path}: {exc}") from exc
    return obj


def _weighted(path):
    return _load(path, weighted=True)


def _ordering(arg):
    if arg is None:
        return None
    return [tok for tok in arg.replace(",", " ").split() if tok]


def _write_json(path, doc):
    text = json.dumps(doc, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_validate(args):
    try:
        d, _ = parse_raw(_read(args.file))
    except ParseError as exc:
        raise _InputError(f"{args.file}: {exc}") from exc
    problems = validate_diagram(d)
    if not problems:
        print(f"valid: {len(d)} vertices, {len(d.satellites)} satellites")
        return OK
    for v in problems:
        print(v)
    return NEGATIVE


def cmd_info(args):
    w = _weighted(args.file)
    d = w.diagram
    print(f"vertices: {len(d)}")
    print(f"free: {len(d.free_vertices)}")
    print(f"satellites: {len(d.satellites)}")
    print(f"degree: {degree(w)}")
    consistent = is_consistent(w)
    print(f"consistent: {str(consistent).lower()}")
    if consistent:
        inv = invariants(w)
        print(f"delta: {inv.delta}")
        print(f"branches: {inv.branches}")
        print(f"milnor: {inv.milnor}")
    else:
        print("delta: n/a\nbranches: n/a\nmilnor: n/a")
    print(f"tame: {str(unload(w).tame).lower()}")
    print(f"type: {str(is_type(w)).lower()}")
    return OK


def cmd_values(args):
    w = _weighted(args.file)
    order = _ordering(args.ordering) or w.diagram.order
    OrderedDiagram(w.diagram, order)  # rejects inadmissible orders
    values = values_from_multiplicities(w)
    rho = excesses(w)
    width = max(len(v) for v in order)
    print(f"{'vertex':<{max(width, 6)}}  mult  value  excess")
    for v in order:
        print(f"{v:<{max(width, 6)}}  {w.mult[v]:>4}  {values[v]:>5}  {rho[v]:>6}")
    return OK


def cmd_unload(args):
    w = _weighted(args.file)
    rep = unload(w, _ordering(args.ordering), max_steps=args.max_steps)
    sys.stdout.write(serialize_diagram(rep.result))
    print(f"# tame: {str(rep.tame).lower()}")
    print(f"# steps: {len(rep.steps)}")
    for v, rho, n in rep.steps:
        print(f"# unload {v} excess {rho} raise {n}")
    return OK


def cmd_dominates(args):
    left, right = _weighted(args.left), _weighted(args.right)
    cert = adj.dominates(left, right, max_nodes=args.max_nodes)
    if args.json:
        _write_json(args.json, domination_json(cert, left, right))
    if cert is None:
        print("NOT_DOMINATES")
        return NEGATIVE
    print("DOMINATES")
    print("embedding: " + " ".join(f"{a}->{b}" for a, b in cert.embedding.pairs()))
    return OK


def _caps(args):
    nodes, pairs = args.max_nodes, args.max_pairs
    for item in filter(None, (args.caps or "").split(",")):
        key, _, val = item.partition("=")
        try:
            val = int(val)
        except ValueError:
            raise _InputError(f"bad cap {item!r}; expected nodes=N or pairs=N") from None
        if key == "nodes":
            nodes = val
        elif key == "pairs":
            pairs = val
        else:
            raise _InputError(f"unknown cap {key!r}")
    return nodes, pairs


def _report(verdict, json_path, kind):
    if json_path:
        _write_json(json_path, certificate_json(verdict, kind))
    print(f"{verdict.kind.value} ({verdict.reason})")
    if verdict.certificate is not None:
        print("embedding: " + " ".join(f"{a}->{b}" for a, b in verdict.certificate.embedding.pairs()))
    if verdict.kind in (adj.Verdict.LINEAR, adj.Verdict.ADJACENT):
        return OK
    if verdict.kind is adj.Verdict.UNKNOWN:
        return EXHAUSTED
    return NEGATIVE


def cmd_linear_adj(args):
    tilde, target = _weighted(args.tilde), _weighted(args.target)
    verdict = adj.linear_adjacent(tilde, target, budget=args.budget, max_nodes=args.max_nodes)
    return _report(verdict, args.json, "linear-adj")


def cmd_adj(args):
    tilde, target = _weighted(args.tilde), _weighted(args.target)
    nodes, pairs = _caps(args)
    verdict = adj.adjacency_verdict(tilde, target, max_nodes=nodes, max_pairs=pairs)
    return _report(verdict, args.json, "adj")


def cmd_enumerate(args):
    if args.vertices is None and args.max_degree is None:
        raise _InputError("give --vertices N or --max-degree D")
    if args.types or args.max_degree is not None:
        items = enumerate_types(args.max_degree or 12)
        if args.vertices is not None:
            items = [w for w in items if len(w) == args.vertices]
    else:
        items = enumerate_diagrams(args.vertices)
    if args.count:
        print(len(items))
        return OK
    for i, obj in enumerate(items):
        if i:
            print()
        sys.stdout.write(serialize_diagram(obj))
    return OK


def cmd_make(args):
    t = named_type(args.spec)
    print(f"# {t.name}")
    sys.stdout.write(serialize_diagram(t.diagram))
    return OK


def cmd_render(args):
    obj = _load(args.file)
    text = render(obj, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_verify(args):
    try:
        doc = load_certificate(args.certificate)
    except OSError as exc:
        raise _InputError(f"{args.certificate}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise _InputError(f"{args.certificate}: not JSON ({exc})") from exc
    report = verify_certificate(doc)
    for c in report.checks:
        print(f"ok: {c}")
    for p in report.problems:
        print(f"FAILED: {p}")
    print("certificate verified" if report.ok else "certificate rejected")
    return OK if report.ok else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="enriques", description="Weighted Enriques diagrams and adjacency of types.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="report axiom violations")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("info", help="degree, invariants and flags")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    for name, func, helptext in (
        ("values", cmd_values, "table of multiplicities, values and excesses"),
        ("unload", cmd_unload, "unload to a consistent diagram"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file")
        p.add_argument("--ordering", help="admissible vertex order, comma or space separated")
        if name == "unload":
            p.add_argument("--max-steps", type=int, default=None)
        p.set_defaults(func=func)

    p = sub.add_parser("dominates", help="decide whether left dominates right")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--max-nodes", type=int, default=adj.MAX_NODES)
    p.set_defaults(func=cmd_dominates)

    p = sub.add_parser("linear-adj", help="decide linear adjacency")
    p.add_argument("tilde")
    p.add_argument("target")
    p.add_argument("--budget", type=int, default=None, help="max vertices added to tilde")
    p.add_argument("--max-nodes", type=int, default=adj.MAX_NODES)
    p.add_argument("--json", metavar="OUT")
    p.set_defaults(func=cmd_linear_adj)

    p = sub.add_parser("adj", help="full adjacency cascade")
    p.add_argument("tilde")
    p.add_argument("target")
    p.add_argument("--caps", help="e.g. nodes=1000000,pairs=10000")
    p.add_argument("--max-nodes", type=int, default=adj.MAX_NODES)
    p.add_argument("--max-pairs", type=int, default=adj.MAX_PAIRS)
    p.add_argument("--json", metavar="OUT")
    p.set_defaults(func=cmd_adj)

    p = sub.add_parser("enumerate", help="list diagrams or types")
    p.add_argument("--vertices", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--types", action="store_true")
    p.add_argument("--count", action="store_true", help="print only the number of results")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("make", help="emit a named type, e.g. A:3 or B:3:4")
    p.add_argument("spec")
    p.set_defaults(func=cmd_make)

    p = sub.add_parser("render", help="draw a diagram")
    p.add_argument("file")
    p.add_argument("--format", choices=("dot", "svg"), default="svg")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="re-check a certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except ResourceLimitError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXHAUSTED
    except (EnriquesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
