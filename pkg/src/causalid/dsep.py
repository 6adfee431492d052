"""d-separation and do-calculus rule checks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import OverlappingSets
from .graph import CausalDiagram, ancestors, mutilate

# Latent parents of bidirected edges are modelled as extra nodes keyed by
# tuples, so they can never collide with an observed name.


def _latent(a, b):
    return ("U", a, b)


def latent_expanded(g: CausalDiagram):
    """Parent and child maps of the DAG with each bidirected edge turned into a fork."""
    parents = {n: list(g.parents(n)) for n in g.nodes}
    children = {n: list(g.children(n)) for n in g.nodes}
    for a, b in g.bidirected:
        u = _latent(a, b)
        parents[u] = []
        children[u] = [a, b]
        parents[a].append(u)
        parents[b].append(u)
    return parents, children


def _disjoint(*sets):
    seen = set()
    for s in sets:
        if seen & s:
            raise OverlappingSets(f"sets must be pairwise disjoint, shared: {sorted(seen & s)}")
        seen |= s


def d_separated(g: CausalDiagram, x, y, z=()) -> bool:
    """True when every path between ``x`` and ``y`` is blocked by ``z``.

    Reachability ("Bayes ball") over the latent-expanded graph, linear in
    the number of edges.
    """
    x, y, z = g.check(x), g.check(y), g.check(z)
    _disjoint(x, y, z)
    if not x or not y:
        return True
    parents, children = latent_expanded(g)

    # nodes with a descendant in z: colliders there are open
    opens = set(z)
    todo = deque(z)
    while todo:
        for p in parents[todo.popleft()]:
            if p not in opens:
                opens.add(p)
                todo.append(p)

    # state: (node, arrived_from_child)
    visited = set()
    todo = deque((n, True) for n in x)
    while todo:
        node, up = todo.popleft()
        if (node, up) in visited:
            continue
        visited.add((node, up))
        if node in y:
            return False
        if up:
            if node in z:
                continue
            todo.extend((p, True) for p in parents[node])
            todo.extend((c, False) for c in children[node])
        else:
            if node not in z:
                todo.extend((c, False) for c in children[node])
            if node in opens:
                todo.extend((p, True) for p in parents[node])
    return True


@dataclass(frozen=True)
class RuleQuery:
    rule: int
    y: frozenset
    z: frozenset
    x: frozenset = frozenset()
    w: frozenset = frozenset()

    def __post_init__(self):
        if self.rule not in (1, 2, 3):
            raise ValueError(f"rule must be 1, 2 or 3, got {self.rule!r}")
        for name in ("y", "z", "x", "w"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        _disjoint(self.y, self.z, self.x, self.w)


def rule_graph(g: CausalDiagram, q: RuleQuery) -> CausalDiagram:
    """The mutilated diagram in which a rule's separation statement is tested."""
    if q.rule == 1:
        return mutilate(g, cut_incoming=q.x)
    if q.rule == 2:
        return mutilate(g, cut_incoming=q.x, cut_outgoing=q.z)
    anc_w = ancestors(mutilate(g, cut_incoming=q.x), q.w)
    return mutilate(g, cut_incoming=q.x | (q.z - anc_w))


def rule_applicable(g: CausalDiagram, q: RuleQuery) -> bool:
    """Whether do-calculus rule ``q.rule`` licenses its rewrite for these sets.

    1: P_x(y|z,w) = P_x(y|w)
    2: P_{x,z}(y|w) = P_x(y|z,w)
    3: P_{x,z}(y|w) = P_x(y|w)
    """
    g.check(q.y | q.z | q.x | q.w)
    return d_separated(rule_graph(g, q), q.y, q.z, q.x | q.w)
