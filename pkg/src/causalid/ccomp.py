"""C-component decomposition, root sets, C-forests and hedge certificates."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import CausalDiagram, ancestors, induced_subgraph, mutilate


def c_components(g: CausalDiagram) -> list:
    """Maximal C-components as node tuples.

    Components come in the diagram order of their first node; nodes inside
    a component keep diagram order too.
    """
    parent = {n: n for n in g.nodes}

    def find(n):
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    for a, b in g.bidirected:
        ra, rb = find(a), find(b)
        if ra != rb:
            # keep the earlier node as representative
            if g.index(ra) < g.index(rb):
                parent[rb] = ra
            else:
                parent[ra] = rb
    groups = {}
    for n in g.nodes:
        groups.setdefault(find(n), []).append(n)
    return [tuple(v) for v in groups.values()]


def root_set(g: CausalDiagram) -> frozenset:
    return frozenset(n for n in g.nodes if not g.children(n))


def is_c_component(g: CausalDiagram) -> bool:
    return len(g.nodes) > 0 and len(c_components(g)) == 1


def is_c_forest(g: CausalDiagram) -> bool:
    """Single C-component in which every node has at most one child."""
    return is_c_component(g) and all(len(g.children(n)) <= 1 for n in g.nodes)


def contains_rooted_c_forest(g: CausalDiagram, nodes, roots) -> bool:
    """Whether some edge subset of ``g[nodes]`` is a C-forest rooted at ``roots``.

    Keep every bidirected edge and give each non-root node exactly one of its
    children; this works precisely when the node set is bidirected-connected
    and every non-root has a child inside it.
    """
    nodes, roots = frozenset(nodes), frozenset(roots)
    if not roots or not roots <= nodes:
        return False
    sub = induced_subgraph(g, nodes)
    if not is_c_component(sub):
        return False
    return all(sub.children(n) for n in sub.nodes if n not in roots)


@dataclass(frozen=True)
class HedgeCertificate:
    """Two nested C-forests witnessing that P_x(y) is not identifiable.

    ``x`` and ``y`` name the (sub)query that failed, which may differ from
    the query originally asked.
    """

    F: tuple
    F_prime: tuple
    root_set: tuple
    x: tuple
    y: tuple

    def message(self) -> str:
        return (
            "Graph contains a hedge formed by C-forests of nodes: "
            "{" + ",".join(self.F) + "} and {" + ",".join(self.F_prime) + "}."
        )

    def to_dict(self) -> dict:
        return {
            "F": list(self.F),
            "F_prime": list(self.F_prime),
            "root_set": list(self.root_set),
            "query": {"y": list(self.y), "x": list(self.x)},
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            tuple(d["F"]), tuple(d["F_prime"]), tuple(d["root_set"]),
            tuple(d["query"]["x"]), tuple(d["query"]["y"]),
        )


def verify_hedge(g: CausalDiagram, cert: HedgeCertificate) -> bool:
    F, Fp, R = frozenset(cert.F), frozenset(cert.F_prime), frozenset(cert.root_set)
    x, y = frozenset(cert.x), frozenset(cert.y)
    g.check(F | Fp | R | x | y)
    if not Fp < F:
        return False
    if not F & x or Fp & x:
        return False
    if not R <= ancestors(mutilate(g, cut_incoming=x), y):
        return False
    return contains_rooted_c_forest(g, F, R) and contains_rooted_c_forest(g, Fp, R)
