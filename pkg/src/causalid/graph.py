"""Semi-Markovian causal diagrams and the graph primitives built on them.

A diagram holds observed nodes, directed edges and bidirected edges. A
bidirected edge stands for a latent common cause of its two endpoints; the
latents themselves are never materialised here.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import DirectedCycle, DoubleDirectedPair, SelfLoop, UnknownNode

ANCESTORS = "ancestors"
DESCENDANTS = "descendants"
PARENTS = "parents"


def _pair_key(order, a, b):
    return (a, b) if order[a] <= order[b] else (b, a)


@dataclass(frozen=True, eq=False)
class CausalDiagram:
    nodes: tuple
    directed: tuple
    bidirected: tuple
    _index: dict = field(repr=False)
    _parents: dict = field(repr=False)
    _children: dict = field(repr=False)
    _siblings: dict = field(repr=False)

    def __eq__(self, other):
        if not isinstance(other, CausalDiagram):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and set(self.directed) == set(other.directed)
            and {frozenset(e) for e in self.bidirected} == {frozenset(e) for e in other.bidirected}
        )

    def __hash__(self):
        return hash((self.nodes, frozenset(self.directed), frozenset(map(frozenset, self.bidirected))))

    def __contains__(self, node):
        return node in self._index

    def __len__(self):
        return len(self.nodes)

    def index(self, node):
        return self._index[node]

    def parents(self, node):
        return self._parents[node]

    def children(self, node):
        return self._children[node]

    def siblings(self, node):
        """Nodes sharing a bidirected edge with ``node``."""
        return self._siblings[node]

    def sort(self, names: Iterable[str]) -> tuple:
        """Return ``names`` as a tuple in diagram node order."""
        return tuple(sorted(set(names), key=self._index.__getitem__))

    def check(self, names: Iterable[str]) -> frozenset:
        names = frozenset(names)
        missing = [n for n in names if n not in self._index]
        if missing:
            raise UnknownNode(f"unknown node(s): {', '.join(sorted(map(str, missing)))}")
        return names


def build_diagram(nodes, directed=(), bidirected=()) -> CausalDiagram:
    """Validate and assemble a diagram.

    Node order is preserved and later used as the tie-breaker everywhere a
    set of nodes is iterated. Repeated edges collapse.
    """
    nodes = tuple(nodes)
    index = {}
    for n in nodes:
        if n in index:
            raise ValueError(f"duplicate node {n!r}")
        index[n] = len(index)

    def endpoint(n):
        if n not in index:
            raise UnknownNode(f"edge endpoint {n!r} is not a declared node")
        return n

    parents = {n: [] for n in nodes}
    children = {n: [] for n in nodes}
    siblings = {n: [] for n in nodes}
    dir_edges = []
    seen = set()
    for a, b in directed:
        a, b = endpoint(a), endpoint(b)
        if a == b:
            raise SelfLoop(f"self-loop on {a!r}")
        if (a, b) in seen:
            continue
        if (b, a) in seen:
            raise DoubleDirectedPair(b, a)
        seen.add((a, b))
        dir_edges.append((a, b))
        parents[b].append(a)
        children[a].append(b)

    bi_edges = []
    bseen = set()
    for a, b in bidirected:
        a, b = endpoint(a), endpoint(b)
        if a == b:
            raise SelfLoop(f"bidirected self-loop on {a!r}")
        key = _pair_key(index, a, b)
        if key in bseen:
            continue
        bseen.add(key)
        bi_edges.append(key)
        siblings[a].append(b)
        siblings[b].append(a)

    def frozen(d):
        return {k: tuple(sorted(v, key=index.__getitem__)) for k, v in d.items()}

    g = CausalDiagram(
        nodes, tuple(dir_edges), tuple(bi_edges), index, frozen(parents), frozen(children), frozen(siblings)
    )
    _raise_on_cycle(g)
    return g


def _raise_on_cycle(g):
    color = dict.fromkeys(g.nodes, 0)
    for root in g.nodes:
        if color[root]:
            continue
        stack = [(root, iter(g.children(root)))]
        path = [root]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            child = next(it, None)
            if child is None:
                color[node] = 2
                stack.pop()
                path.pop()
            elif color[child] == 1:
                raise DirectedCycle(path[path.index(child):])
            elif color[child] == 0:
                color[child] = 1
                path.append(child)
                stack.append((child, iter(g.children(child))))


def relatives(g: CausalDiagram, y, kind: str = ANCESTORS) -> frozenset:
    """Reflexive closure of ``y`` along directed edges.

    ``kind`` is one of ``"ancestors"``, ``"descendants"`` or ``"parents"``
    (one step up, plus ``y``). Bidirected edges never contribute.
    """
    y = g.check(y)
    if kind == PARENTS:
        return frozenset(y).union(*(g.parents(n) for n in y))
    if kind == ANCESTORS:
        step = g.parents
    elif kind == DESCENDANTS:
        step = g.children
    else:
        raise ValueError(f"unknown relation {kind!r}")
    out = set(y)
    todo = deque(y)
    while todo:
        for m in step(todo.popleft()):
            if m not in out:
                out.add(m)
                todo.append(m)
    return frozenset(out)


def ancestors(g, y):
    return relatives(g, y, ANCESTORS)


def descendants(g, y):
    return relatives(g, y, DESCENDANTS)


def induced_subgraph(g: CausalDiagram, keep) -> CausalDiagram:
    keep = g.check(keep)
    return build_diagram(
        [n for n in g.nodes if n in keep],
        [(a, b) for a, b in g.directed if a in keep and b in keep],
        [(a, b) for a, b in g.bidirected if a in keep and b in keep],
    )


def mutilate(g: CausalDiagram, cut_incoming=(), cut_outgoing=()) -> CausalDiagram:
    """Remove edges into ``cut_incoming`` and out of ``cut_outgoing``.

    Bidirected edges touching a node of ``cut_incoming`` go as well, since
    they are incoming arrows from a latent parent.
    """
    inc = g.check(cut_incoming)
    out = g.check(cut_outgoing)
    if not inc and not out:
        return g
    return build_diagram(
        g.nodes,
        [(a, b) for a, b in g.directed if b not in inc and a not in out],
        [(a, b) for a, b in g.bidirected if a not in inc and b not in inc],
    )


def topological_order(g: CausalDiagram) -> tuple:
    """Layered ordering: peel off all parentless nodes, in diagram order, repeatedly."""
    indeg = {n: len(g.parents(n)) for n in g.nodes}
    layer = [n for n in g.nodes if indeg[n] == 0]
    order = []
    while layer:
        order.extend(layer)
        nxt = set()
        for n in layer:
            for c in g.children(n):
                indeg[c] -= 1
                if indeg[c] == 0:
                    nxt.add(c)
        layer = g.sort(nxt)
    return tuple(order)


def is_topological(g: CausalDiagram, order) -> bool:
    pos = {n: i for i, n in enumerate(order)}
    if len(pos) != len(order) or set(pos) != set(g.nodes):
        return False
    return all(pos[a] < pos[b] for a, b in g.directed)
