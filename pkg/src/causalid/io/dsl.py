"""A small text format for diagrams.

    # a front-door graph with a covariate
    W -> X, W -> Z, X -> Z
    Z -> Y
    X <-> Y

Statements are separated by commas or newlines. ``A -> B`` is a directed
edge, ``A <-> B`` a bidirected one and a bare name declares a node. Nodes
are ordered by first mention; ``#`` starts a comment.
"""

from __future__ import annotations

import re

from ..errors import EmptyGraph, ParseError
from ..graph import CausalDiagram, build_diagram

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_.]*)|(?P<op><->|->)|(?P<sep>,)|(?P<bad>\S))")


def _tokens(line, lineno):
    pos = 0
    text = line.split("#", 1)[0]
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        col = m.start(m.lastgroup) + 1
        if m.lastgroup == "bad":
            raise ParseError(f"unexpected character {m.group('bad')!r}", lineno, col)
        yield m.lastgroup, m.group(m.lastgroup), col
        pos = m.end()
    yield "sep", "\n", len(text) + 1


def parse_dsl(text: str) -> CausalDiagram:
    nodes, directed, bidirected = {}, [], []
    stmt = []

    def finish(lineno, col):
        if not stmt:
            return
        kinds = [k for k, _, _ in stmt]
        if kinds == ["name"]:
            nodes.setdefault(stmt[0][1], None)
        elif kinds == ["name", "op", "name"]:
            a, op, b = stmt[0][1], stmt[1][1], stmt[2][1]
            nodes.setdefault(a, None)
            nodes.setdefault(b, None)
            (directed if op == "->" else bidirected).append((a, b))
        elif kinds[0] != "name":
            raise ParseError(f"statement cannot start with {stmt[0][1]!r}", lineno, stmt[0][2])
        elif kinds[-1] == "op":
            raise ParseError(f"missing node after {stmt[-1][1]!r}", lineno, col)
        else:
            # point at the first token that breaks the NAME [OP NAME] shape
            bad = stmt[1] if kinds[1] != "op" else stmt[3]
            raise ParseError("expected 'A -> B', 'A <-> B' or a single node name", lineno, bad[2])
        stmt.clear()

    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        for kind, tok, col in _tokens(line, lineno):
            if kind == "sep":
                finish(lineno, col)
            else:
                stmt.append((kind, tok, col))
    if not nodes:
        raise EmptyGraph("no nodes declared")
    return build_diagram(list(nodes), directed, bidirected)


def render_dsl(g: CausalDiagram) -> str:
    """Inverse of :func:`parse_dsl`: node declarations first, then edges."""
    lines = list(g.nodes)
    lines += [f"{a} -> {b}" for a, b in g.directed]
    lines += [f"{a} <-> {b}" for a, b in g.bidirected]
    return "\n".join(lines) + "\n"
