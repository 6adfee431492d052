"""Command line driver.

Exit status: 0 on success (identifiable, or a completed check), 2 when the
effect is not identifiable, 3 when ``verify`` finds a mismatch, 1 on usage,
input or parse errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path

from .ccomp import c_components
from .dsep import RuleQuery, d_separated, rule_applicable
from .ident import Query, identify
from .io.dsl import parse_dsl
from .io.graphml import parse_graphml
from .io.render import render

EXIT_OK, EXIT_ERROR, EXIT_HEDGE, EXIT_MISMATCH = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _names(text):
    return [n.strip() for n in text.split(",") if n.strip()] if text else []


def load_graph(path, notation="auto", names=None, use_names=True):
    path = Path(path)
    if notation == "auto":
        notation = "dsl" if path.suffix.lower() in (".dsl", ".txt") else "standard"
    if notation == "dsl":
        return parse_dsl(path.read_text())
    with path.open("rb") as fh:
        return parse_graphml(fh, notation, names=names or None, use_names=use_names)


def _add_graph(p):
    p.add_argument("--graph", required=True, help="GraphML or DSL file")
    p.add_argument("--notation", default="auto", choices=("auto", "standard", "internal", "dsl"),
                   help="bidirected-edge convention; auto picks dsl for .dsl/.txt, else standard")
    p.add_argument("--names", type=_names, help="comma-separated node names replacing those in the GraphML file")
    p.add_argument("--ignore-file-names", action="store_true", help="name GraphML nodes v1..vn")


def build_parser():
    parser = _Parser(prog="causalid", description="Identify causal effects in semi-Markovian diagrams.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("identify", help="express P_x(y | z) through the observational joint")
    _add_graph(p)
    p.add_argument("--on", type=_names, required=True, help="outcome nodes y")
    p.add_argument("--do", type=_names, default=[], help="intervened nodes x")
    p.add_argument("--given", type=_names, default=[], help="conditioning nodes z")
    p.add_argument("--format", default="latex", choices=("latex", "text", "json"))
    p.add_argument("--prune", action=argparse.BooleanOptionalAction, default=True,
                   help="drop conditioning variables made irrelevant by d-separation")

    p = sub.add_parser("check-dsep", help="test (x independent of y | z) in the diagram")
    _add_graph(p)
    p.add_argument("-x", type=_names, required=True)
    p.add_argument("-y", type=_names, required=True)
    p.add_argument("-z", type=_names, default=[])

    p = sub.add_parser("check-rule", help="test whether a do-calculus rule applies")
    _add_graph(p)
    p.add_argument("--rule", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("-y", type=_names, required=True)
    p.add_argument("-z", type=_names, required=True, help="the set the rule rewrites")
    p.add_argument("-x", type=_names, default=[], help="interventions kept in place")
    p.add_argument("-w", type=_names, default=[], help="observations kept in place")

    p = sub.add_parser("decompose", help="list the maximal C-components")
    _add_graph(p)
    p.add_argument("--format", default="text", choices=("text", "json"))

    p = sub.add_parser("verify", help="check an identification result numerically on random models")
    _add_graph(p)
    p.add_argument("--on", type=_names, required=True)
    p.add_argument("--do", type=_names, default=[])
    p.add_argument("--given", type=_names, default=[])
    p.add_argument("--models", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cardinality", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-9)
    return parser


def _identify(g, args, out, err):
    q = Query(frozenset(args.on), frozenset(args.do), frozenset(args.given))
    result = identify(q, g, prune=args.prune)
    if not result.identifiable:
        print(result.hedge.message(), file=err)
        if args.format == "json":
            print(json.dumps(result.hedge.to_dict(), sort_keys=True), file=out)
        return EXIT_HEDGE
    print(render(result.expression, args.format), file=out)
    return EXIT_OK


def _verify(g, args, out, err):
    from .oracle import verify_query

    q = Query(frozenset(args.on), frozenset(args.do), frozenset(args.given))
    q.validate(g)
    report = verify_query(g, q, n_models=args.models, seed=args.seed,
                          cardinalities=args.cardinality, tol=args.tol)
    print(json.dumps(report.to_dict(), sort_keys=True), file=out)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def run(args, out=sys.stdout, err=sys.stderr) -> int:
    g = load_graph(args.graph, args.notation, args.names, not args.ignore_file_names)
    if args.command == "identify":
        return _identify(g, args, out, err)
    if args.command == "check-dsep":
        print(str(d_separated(g, set(args.x), set(args.y), set(args.z))).lower(), file=out)
        return EXIT_OK
    if args.command == "check-rule":
        q = RuleQuery(args.rule, frozenset(args.y), frozenset(args.z), frozenset(args.x), frozenset(args.w))
        print(str(rule_applicable(g, q)).lower(), file=out)
        return EXIT_OK
    if args.command == "decompose":
        comps = c_components(g)
        if args.format == "json":
            print(json.dumps([list(c) for c in comps]), file=out)
        else:
            for c in comps:
                print(",".join(c), file=out)
        return EXIT_OK
    return _verify(g, args, out, err)


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(out):
            args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR
    try:
        return run(args, out, err)
    except (ValueError, OSError) as e:
        print(f"causalid: error: {e}", file=err)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
