"""Expression printers: LaTeX, plain text and JSON."""

from __future__ import annotations

import json

from ..expr import Atomic, Expression, Product, to_json


def _atomic(e: Atomic) -> str:
    body = ",".join(e.var)
    if e.cond:
        body += "|" + ",".join(e.cond)
    return f"P({body})"


def to_latex(e: Expression) -> str:
    if isinstance(e, Atomic):
        body = _atomic(e)
    elif isinstance(e, Product):
        body = "".join(to_latex(c) for c in e.children)
    else:
        body = "\\frac{" + to_latex(e.numerator) + "}{" + to_latex(e.divisor) + "}"
    if e.sumset:
        return "\\left(\\sum_{" + ",".join(e.sumset) + "}" + body + "\\right)"
    return body


def to_text(e: Expression) -> str:
    if isinstance(e, Atomic):
        body = _atomic(e)
    elif isinstance(e, Product):
        body = "".join(to_text(c) for c in e.children)
    else:
        body = "[" + to_text(e.numerator) + "] / [" + to_text(e.divisor) + "]"
    if e.sumset:
        return "(sum_{" + ",".join(e.sumset) + "} " + body + ")"
    return body


def render(e: Expression, fmt: str = "latex") -> str:
    if fmt == "latex":
        return to_latex(e)
    if fmt == "text":
        return to_text(e)
    if fmt == "json":
        return json.dumps(to_json(e), sort_keys=True)
    raise ValueError(f"unknown format {fmt!r}")
