"""Recursive identification of interventional distributions.

``id`` decides whether P_x(y) is determined by the observational joint of
a semi-Markovian diagram and builds the expression when it is; ``idc``
does the same for P_x(y | z). A non-identifiable query comes back with a
hedge certificate instead of an expression.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ccomp import HedgeCertificate, c_components
from .dsep import d_separated
from .errors import InvalidQuery
from .expr import Atomic, Expression, Fraction, Product, conditional, free_variables, normalize, product, with_sumset
from .graph import CausalDiagram, ancestors, induced_subgraph, mutilate, topological_order


@dataclass(frozen=True)
class Query:
    y: frozenset
    x: frozenset = frozenset()
    z: frozenset = frozenset()

    def __post_init__(self):
        for name in ("y", "x", "z"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    def validate(self, g: CausalDiagram):
        if not self.y:
            raise InvalidQuery("the outcome set y is empty")
        for a, b in (("y", "x"), ("y", "z"), ("x", "z")):
            shared = getattr(self, a) & getattr(self, b)
            if shared:
                raise InvalidQuery(f"{a} and {b} share {sorted(shared)}")
        missing = (self.y | self.x | self.z) - set(g.nodes)
        if missing:
            raise InvalidQuery(f"not in the graph: {sorted(missing)}")


@dataclass
class IdentResult:
    expression: Optional[Expression] = None
    hedge: Optional[HedgeCertificate] = None

    def __post_init__(self):
        if (self.expression is None) == (self.hedge is None):
            raise ValueError("exactly one of expression and hedge must be set")

    @property
    def identifiable(self) -> bool:
        return self.expression is not None


class Hedge(Exception):
    def __init__(self, cert):
        super().__init__(cert.message())
        self.cert = cert


@dataclass
class Trace:
    """Record of one identification run: a ``[depth, line]`` pair per call."""

    calls: list = field(default_factory=list)

    @property
    def max_depth(self):
        return max((d for d, _ in self.calls), default=0)


class _Identifier:
    def __init__(self, order, prune=True, ancestral="pass", trace=None):
        self.order = tuple(order)
        self.pos = {n: i for i, n in enumerate(self.order)}
        self.prune = prune
        # "pass": line 2 hands P down unchanged and lets the smaller graph
        # do the work; "marginalize": P is summed down to the ancestors first
        self.ancestral = ancestral
        self.trace = trace

    def ts(self, names):
        return tuple(sorted(names, key=self.pos.__getitem__))

    def _fire(self, entry, line):
        if entry is not None:
            if entry[1] is not None:
                raise AssertionError(f"lines {entry[1]} and {line} both fired")
            entry[1] = line

    def id(self, y, x, P, joint, G, depth=0):
        y, x = frozenset(y), frozenset(x)
        entry = None
        if self.trace is not None:
            entry = [depth, None]
            self.trace.calls.append(entry)
        nodes = frozenset(G.nodes)
        v = self.ts(nodes)

        if not x:
            self._fire(entry, 1)
            if _plain(P):
                return Atomic(self.ts(y))
            return with_sumset(P, self.ts(joint - y), self.pos.__getitem__)

        anc = ancestors(G, y)
        if anc != nodes:
            self._fire(entry, 2)
            if self.ancestral == "marginalize":
                P, joint = self._marginal(P, joint, anc)
            return self.id(y, x & anc, P, joint, induced_subgraph(G, anc), depth + 1)

        w = (nodes - x) - ancestors(mutilate(G, cut_incoming=x), y)
        if w:
            self._fire(entry, 3)
            return self.id(y, x | w, P, joint, G, depth + 1)

        comps = [frozenset(s) for s in c_components(induced_subgraph(G, nodes - x))]
        if len(comps) > 1:
            self._fire(entry, 4)
            terms = [self.id(s, nodes - s, P, joint, G, depth + 1) for s in comps]
            return product(terms, self.ts(nodes - (y | x)))

        s = comps[0]
        whole = [frozenset(c) for c in c_components(G)]
        if len(whole) == 1:
            self._fire(entry, 5)
            raise Hedge(HedgeCertificate(v, self.ts(s), self.ts(y), self.ts(x), self.ts(y)))

        if s in whole:
            self._fire(entry, 6)
            terms = [self._factor(P, joint, vi, v, G, self.prune) for vi in reversed(self.ts(s))]
            return product(terms, self.ts(s - y))

        self._fire(entry, 7)
        big = next(c for c in whole if s < c)
        terms = [self._factor(P, joint, vi, v, G, False) for vi in reversed(self.ts(big))]
        return self.id(y, x & big, Product(tuple(terms)), big, induced_subgraph(G, big), depth + 1)

    def _factor(self, P, joint, vi, v, G, prune):
        """P(vi | everything before vi in ``v``), read off the current distribution."""
        cond = list(v[: v.index(vi)])
        if prune:
            for d in list(cond):
                rest = [c for c in cond if c != d]
                if d_separated(G, {vi}, {d}, rest):
                    cond = rest
        if _plain(P):
            return Atomic((vi,), tuple(cond))
        num = with_sumset(P, self.ts(joint - {vi} - set(cond)), self.pos.__getitem__)
        if not cond:
            return num
        den = with_sumset(P, self.ts(joint - set(cond)), self.pos.__getitem__)
        return Fraction(num, den)

    def _marginal(self, P, joint, keep):
        if _plain(P):
            return Atomic(self.ts(keep)), frozenset(keep)
        return with_sumset(P, self.ts(joint - keep), self.pos.__getitem__), frozenset(keep)

    def idc(self, y, x, z, P, joint, G):
        y, x, z = frozenset(y), frozenset(x), frozenset(z)
        for node in G.sort(z):
            rest = z - {node}
            cut = mutilate(G, cut_incoming=x, cut_outgoing={node})
            if d_separated(cut, y, {node}, x | rest):
                return self.idc(y, x | {node}, rest, P, joint, G)
        joint_expr = self.id(y | z, x, P, joint, G)
        given = free_variables(joint_expr) - y
        return conditional(joint_expr, given, self.pos.__getitem__)


def _plain(P):
    return isinstance(P, Atomic) and not P.cond and not P.sumset


def _run(fn):
    try:
        return IdentResult(expression=normalize(fn()))
    except Hedge as h:
        return IdentResult(hedge=h.cert)


def _joint_of(P):
    if _plain(P):
        return frozenset(P.var)
    return free_variables(P)


def id(y, x, P, G, order=None, *, prune=True, ancestral="pass", trace=None) -> IdentResult:
    """Identify P_x(y) from distribution expression ``P`` over the nodes of ``G``."""
    ident = _Identifier(order or topological_order(G), prune, ancestral, trace)
    return _run(lambda: ident.id(y, x, P, _joint_of(P), G))


def idc(y, x, z, P, G, order=None, *, prune=True, ancestral="pass", trace=None) -> IdentResult:
    """Identify P_x(y | z); with empty ``z`` this is :func:`id`."""
    ident = _Identifier(order or topological_order(G), prune, ancestral, trace)
    if not z:
        return _run(lambda: ident.id(y, x, P, _joint_of(P), G))
    return _run(lambda: ident.idc(y, x, z, P, _joint_of(P), G))


def identify(q: Query, G: CausalDiagram, *, prune=True, ancestral="pass", trace=None) -> IdentResult:
    """Identify ``q`` starting from the observational joint over all nodes of ``G``."""
    q.validate(G)
    P = Atomic(tuple(G.nodes))
    if q.z:
        return idc(q.y, q.x, q.z, P, G, prune=prune, ancestral=ancestral, trace=trace)
    return id(q.y, q.x, P, G, prune=prune, ancestral=ancestral, trace=trace)
