"""Command-line front end.

Exit codes: 0 on success, 1 on a domain error (bad tree, query outside a
function's domain, unknown scenario), 2 on a usage error. All numbers are
printed as exact rationals; ``--decimal`` adds a decimal rendering.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import axioms as ax
from .responsibility import VariantId, evaluate
from .scenarios import (
    MethodId,
    ParadigmId,
    VotingParams,
    build_paradigmatic,
    build_voting_tree,
    verify_table2,
)
from .tree_core import Ambiguity, Decision, Event, Probability, TreeError
from .tree_io import ParseError, TreeDocument, emit_dot, format_rational, load_bundled, parse, serialize

__all__ = ["main", "build_parser"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _csv(text: str) -> list[str]:
    items = [x.strip() for x in text.split(",")]
    if not all(items):
        raise argparse.ArgumentTypeError(f"empty item in {text!r}")
    return items


def _variant(text: str) -> VariantId:
    try:
        return VariantId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _nonnegative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {n}")
    return n


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "json-lines"), default="table",
                   help="human-readable table (default) or one JSON object per line")
    p.add_argument("--decimal", action="store_true", help="also print each number as a decimal")
    p.add_argument("--digits", type=_nonnegative, default=6, help="decimal places for --decimal (default 6)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="respcalc", description="Degrees of responsibility in multi-agent decision trees.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("check", help="parse and validate a tree file",
                       description="Parse a tree file (or bundled tree name) and print its shape.")
    p.add_argument("file", help="path to a .tree file, or the name of a bundled tree")
    _add_output_flags(p)

    p = sub.add_parser("eval", help="evaluate one responsibility value",
                       description="Evaluate the backward value at an outcome or the forward value at a "
                                   "decision node of the group.")
    p.add_argument("--tree", required=True, help="path to a .tree file, or the name of a bundled tree")
    p.add_argument("--variant", required=True, type=_variant, help="0, 1, 2, 3, 4 or ness")
    p.add_argument("--direction", required=True, choices=("forward", "backward"))
    p.add_argument("--node", required=True, help="outcome (backward) or group decision node (forward)")
    p.add_argument("--group", required=True, type=_csv, help="comma-separated agents")
    p.add_argument("--event", type=_csv, help="comma-separated undesired outcomes (default: the tree's own)")
    p.add_argument("--verbose", action="store_true", help="also print per-decision summands and intermediates")
    _add_output_flags(p)

    p = sub.add_parser("axioms", help="search for a counterexample to one axiom",
                       description="Search random trees (or the fixed trees of special-situation axioms) "
                                   "for a counterexample.")
    p.add_argument("--variant", required=True, type=_variant)
    p.add_argument("--axiom", required=True, help="axiom id, e.g. IND, IAT, PCont")
    p.add_argument("--seed", type=_nonnegative, default=0, help="generator seed (default 0)")
    p.add_argument("--budget", type=_nonnegative, default=1000, help="random trees to draw (default 1000)")
    _add_output_flags(p)

    p = sub.add_parser("matrix", help="compliance matrix of variants against axioms",
                       description="Check each variant against each axiom, trying the named "
                                   "counterexample first and then a random search.")
    p.add_argument("--seed", type=_nonnegative, default=0, help="generator seed (default 0)")
    p.add_argument("--budget", type=_nonnegative, default=1000, help="random trees per cell (default 1000)")
    p.add_argument("--variants", type=_csv, default=["0", "1", "2", "3", "4"], help="comma-separated variants")
    p.add_argument("--axioms", type=_csv, default=[a.value for a in ax.TABLE1_AXIOMS],
                   help="comma-separated axiom ids (default: the compliance table's columns)")
    _add_output_flags(p)

    p = sub.add_parser("table2", help="compare voting trees with the closed forms",
                       description="Build every voting tree for the given voter counts and compare tree "
                                   "evaluation with the closed-form values.")
    p.add_argument("--N", dest="n", required=True, type=_nonnegative, action="append",
                   help="odd number of voters; repeat for several")
    p.add_argument("--method", type=_csv, help="comma-separated methods (default: all)")
    p.add_argument("--variants", type=_csv, default=["0", "1", "2", "3", "4"], help="comma-separated variants")
    p.add_argument("--show-all", action="store_true", help="list matching rows too")
    _add_output_flags(p)

    p = sub.add_parser("scenario", help="write an example or voting tree",
                       description="Write a paradigmatic example tree or a voting tree in the text format. "
                                   f"Examples: {', '.join(x.value for x in ParadigmId)}. "
                                   f"Voting methods: {', '.join(x.value for x in MethodId)}.")
    p.add_argument("--id", required=True, help="example or voting method name")
    p.add_argument("--p", type=_rational, default=Fraction(0), help="probability parameter p (default 0)")
    p.add_argument("--q", type=_rational, default=Fraction(1), help="probability parameter q (default 1)")
    p.add_argument("--N", dest="n", type=_nonnegative, default=3, help="voters (default 3)")
    p.add_argument("--m", type=_nonnegative, default=1, help="group size (default 1)")
    p.add_argument("--k", type=_nonnegative, default=2, help="acceptable options (default 2)")
    p.add_argument("-o", "--output", help="output file (default: standard output)")

    p = sub.add_parser("render", help="export a tree as Graphviz DOT",
                       description="Write a Graphviz DOT rendering of a tree.")
    p.add_argument("--tree", required=True, help="path to a .tree file, or the name of a bundled tree")
    p.add_argument("-o", "--output", help="output .dot file (default: standard output)")
    return parser


def _load(ref: str) -> TreeDocument:
    path = Path(ref)
    if path.is_file():
        return parse(path.read_text(encoding="utf-8"))
    try:
        return load_bundled(ref)
    except FileNotFoundError:
        raise FileNotFoundError(f"no such tree file or bundled tree: {ref}") from None


def _num(x: Fraction, args) -> str:
    text = format_rational(x)
    if args.decimal:
        text += f" ({float(x):.{args.digits}f})"
    return text


def _json_num(x: Fraction, args) -> dict:
    out = {"value": format_rational(x)}
    if args.decimal:
        out["decimal"] = f"{float(x):.{args.digits}f}"
    return out


def _emit(out, row: dict) -> None:
    out.write(json.dumps(row, sort_keys=True) + "\n")


def _write(text: str, target: str | None, out) -> None:
    if target is None:
        out.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def _cmd_check(args, out) -> int:
    doc = _load(args.file)
    tree = doc.tree
    counts = {"decision": 0, "ambiguity": 0, "probability": 0, "outcome": 0}
    for k in tree.nodes.values():
        key = ("decision" if isinstance(k, Decision) else "ambiguity" if isinstance(k, Ambiguity)
               else "probability" if isinstance(k, Probability) else "outcome")
        counts[key] += 1
    if args.format == "json-lines":
        _emit(out, {"tree": doc.name, "nodes": len(tree.nodes), "agents": sorted(tree.agents),
                    "event": sorted(doc.event), **counts})
        return 0
    out.write(f"tree {doc.name}: ok\n")
    out.write(f"  nodes    {len(tree.nodes)} ({', '.join(f'{n} {k}' for k, n in counts.items())})\n")
    out.write(f"  agents   {', '.join(sorted(tree.agents)) or '-'}\n")
    out.write(f"  event    {', '.join(sorted(doc.event)) or '-'}\n")
    return 0


def _cmd_eval(args, out) -> int:
    doc = _load(args.tree)
    event = Event(args.event) if args.event is not None else doc.event
    report = evaluate(args.variant, args.direction, doc.tree, event, frozenset(args.group), args.node)
    if args.format == "json-lines":
        row = {"tree": doc.name, "variant": args.variant.value, "direction": args.direction,
               "node": args.node, "group": sorted(args.group), "event": sorted(event),
               **_json_num(report.value, args)}
        if args.verbose:
            row["per_decision"] = {k: format_rational(v) for k, v in sorted(report.per_decision.items())}
            row["intermediates"] = {k: format_rational(v) for k, v in sorted(report.intermediates.items())}
        _emit(out, row)
        return 0
    out.write(_num(report.value, args) + "\n")
    if args.verbose:
        for k, v in sorted(report.per_decision.items()):
            out.write(f"  summand at {k}: {_num(v, args)}\n")
        for k, v in sorted(report.intermediates.items()):
            out.write(f"  {k}: {_num(v, args)}\n")
    return 0


def _result_row(r: ax.CheckResult) -> dict:
    row = {"axiom": r.axiom.value, "variant": r.variant.value, "status": r.status.value,
           "source": r.source, "checked": r.checked, "budget": r.budget, "seed": r.seed, "note": r.note}
    if r.witness is not None:
        row["witness"] = {
            "instance": r.witness.instance.describe(),
            "tree": serialize(r.witness.instance.doc),
            "failures": [str(c) for c in r.witness.failures],
        }
    return row


def _cmd_axioms(args, out) -> int:
    axiom = ax.AxiomId.parse(args.axiom)
    result = ax.falsify(args.variant, axiom, ax.GeneratorConfig(seed=args.seed), args.budget)
    if args.format == "json-lines":
        _emit(out, _result_row(result))
        return 0
    out.write(result.summary() + "\n")
    if result.witness is not None:
        out.write(serialize(result.witness.instance.doc))
    return 0


def _cmd_matrix(args, out) -> int:
    variants = [VariantId.parse(v) for v in args.variants]
    axs = [ax.AxiomId.parse(a) for a in args.axioms]
    m = ax.compliance_matrix(variants, axs, ax.GeneratorConfig(seed=args.seed), args.budget)
    if args.format == "json-lines":
        for v in m.variants:
            for a in m.axioms:
                _emit(out, _result_row(m.cells[(v, a)]))
        return 0
    out.write(m.to_text())
    return 0


def _cmd_table2(args, out) -> int:
    methods = [MethodId(x) for x in args.method] if args.method else list(MethodId)
    for n in args.n:
        VotingParams(n, 1)
    report = verify_table2(methods, args.variants, tuple(args.n))
    rows = report.rows if args.show_all else report.mismatches
    if args.format == "json-lines":
        for r in rows:
            p = r.params
            _emit(out, {"method": r.method.value, "variant": r.variant.value, "direction": r.direction,
                        "N": p.N, "m": p.m, "u": p.u, "a": p.a, "b": p.b, "round": p.round,
                        "votes": list(p.votes), "node": r.node, "match": r.match,
                        "table": format_rational(r.expected), "tree": format_rational(r.computed)})
        _emit(out, {"summary": True, "compared": len(report.rows), "mismatches": len(report.mismatches),
                    "skipped_knife_edge": report.skipped_knife_edge, "skipped_tie": report.skipped_tie,
                    "skipped_unparameterized": report.skipped_unparameterized})
        return 0
    for r in rows:
        out.write(("match    " if r.match else "MISMATCH ") + r.describe() + "\n")
    per_method: dict[MethodId, list[int]] = {}
    for r in report.rows:
        c = per_method.setdefault(r.method, [0, 0])
        c[0] += 1
        c[1] += not r.match
    width = max(len(x.value) for x in methods)
    out.write(f"{'method'.ljust(width)}  compared  mismatches\n")
    for method in methods:
        n, bad = per_method.get(method, [0, 0])
        out.write(f"{method.value.ljust(width)}  {n:8d}  {bad:10d}\n")
    out.write(f"N = {', '.join(map(str, args.n))}: {len(report.rows)} compared, {len(report.mismatches)} mismatches; "
              f"skipped {report.skipped_knife_edge} knife-edge, {report.skipped_tie} tie, "
              f"{report.skipped_unparameterized} without a closed form\n")
    out.write("all match\n" if report.ok else "mismatches found\n")
    return 0


def _cmd_scenario(args, out) -> int:
    name = args.id
    if name in {x.value for x in ParadigmId}:
        doc = build_paradigmatic(name, args.p, args.q)
    elif name in {x.value for x in MethodId}:
        doc = build_voting_tree(name, VotingParams(args.n, args.m, args.k))
    else:
        raise ValueError(f"unknown scenario {name!r}")
    _write(serialize(doc), args.output, out)
    return 0


def _cmd_render(args, out) -> int:
    _write(emit_dot(_load(args.tree)), args.output, out)
    return 0


_COMMANDS = {
    "check": _cmd_check,
    "eval": _cmd_eval,
    "axioms": _cmd_axioms,
    "matrix": _cmd_matrix,
    "table2": _cmd_table2,
    "scenario": _cmd_scenario,
    "render": _cmd_render,
}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        err.write(f"{exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except ParseError as exc:
        where = getattr(args, "file", None) or getattr(args, "tree", "")
        err.write(f"error: {where}:{exc}\n" if exc.line else f"error: {where}: {exc}\n")
    except (TreeError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
    return 1


if __name__ == "__main__":
    sys.exit(main())
