"""Numeric ground truth for identification results.

Random discrete structural causal models over a diagram, exact
observational and interventional distributions by dense enumeration, and
an evaluator that gives expressions their numeric meaning. Everything here
is brute force on purpose: it is a checker, not an inference engine.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from functools import reduce
from operator import mul

import numpy as np

from .ccomp import verify_hedge
from .errors import InvalidAssignment, InvalidCardinality, StateSpaceTooLarge, UnknownVariable, ZeroDivisor
from .expr import Atomic, Expression, Marker, Product, free_variables
from .graph import CausalDiagram
from .ident import IdentResult, Query, identify

MAX_CELLS = 10**7
FLOOR = 0.01

_LETTERS = string.ascii_letters


@dataclass
class Factor:
    """A labelled dense array; axis ``i`` belongs to ``variables[i]``."""

    variables: tuple
    values: np.ndarray

    @property
    def cards(self):
        return dict(zip(self.variables, self.values.shape))

    def aligned(self, variables):
        """Values transposed to ``variables`` order (must be the same set)."""
        return np.transpose(self.values, [self.variables.index(v) for v in variables])

    def sum_out(self, names):
        axes = tuple(i for i, v in enumerate(self.variables) if v in names)
        if not axes:
            return self
        kept = tuple(v for v in self.variables if v not in names)
        return Factor(kept, self.values.sum(axis=axes))

    def marginal(self, keep):
        return self.sum_out(set(self.variables) - set(keep))


class JointTable(Factor):
    """A normalised Factor over observed variables."""

    def total(self):
        return float(self.values.sum())


def _einsum(factors, out_vars):
    letters = {}
    for f in factors:
        for v in f.variables:
            letters.setdefault(v, _LETTERS[len(letters)])
    for v in out_vars:
        letters.setdefault(v, _LETTERS[len(letters)])
    spec = ",".join("".join(letters[v] for v in f.variables) for f in factors)
    spec += "->" + "".join(letters[v] for v in out_vars)
    return np.einsum(spec, *(f.values for f in factors))


def multiply(factors):
    out = []
    for f in factors:
        for v in f.variables:
            if v not in out:
                out.append(v)
    return Factor(tuple(out), _einsum(factors, out))


def divide(num: Factor, den: Factor) -> Factor:
    out = list(num.variables) + [v for v in den.variables if v not in num.variables]
    cards = {**den.cards, **num.cards}

    def expand(f):
        arr = np.transpose(f.values, [f.variables.index(v) for v in out if v in f.variables])
        shape = [cards[v] if v in f.variables else 1 for v in out]
        return arr.reshape(shape)

    d = expand(den)
    if np.any(d == 0):
        raise ZeroDivisor("division by a zero probability")
    return Factor(tuple(out), expand(num) / d)


# -- models -----------------------------------------------------------------------


@dataclass
class DiscreteSCM:
    """Observed nodes of ``diagram`` plus one latent parent per bidirected edge.

    ``mechanisms[v]`` is a Factor over (observed parents, latent parents, v)
    normalised over its last axis; ``priors[u]`` is a Factor over (u,).
    """

    diagram: CausalDiagram
    cards: dict
    latents: dict  # latent name -> (a, b)
    mechanisms: dict
    priors: dict
    _cache: dict = field(default_factory=dict, repr=False)


def _positive_rows(rng, shape):
    k = shape[-1]
    draws = rng.dirichlet(np.ones(k), size=shape[:-1])
    return FLOOR + (1.0 - FLOOR * k) * draws


def random_scm(g: CausalDiagram, cardinalities=2, seed=0, latent_cardinality=None) -> DiscreteSCM:
    """Seeded random positive model over ``g``.

    ``cardinalities`` is an int for every node or a per-node mapping. Each
    latent gets at least three states, and never fewer than its endpoints.
    """
    if isinstance(cardinalities, int):
        cards = dict.fromkeys(g.nodes, cardinalities)
    else:
        cards = {n: cardinalities[n] for n in g.nodes}
    if any(c < 2 for c in cards.values()):
        raise InvalidCardinality("every variable needs at least two states")
    rng = np.random.default_rng(seed)
    latents = {}
    for a, b in g.bidirected:
        u = f"U[{a},{b}]"
        latents[u] = (a, b)
        cards[u] = latent_cardinality or max(3, cards[a], cards[b])
    priors = {u: Factor((u,), _positive_rows(rng, (cards[u],))) for u in latents}
    mechanisms = {}
    for v in g.nodes:
        lat = [u for u, pair in latents.items() if v in pair]
        scope = tuple(g.parents(v)) + tuple(lat) + (v,)
        mechanisms[v] = Factor(scope, _positive_rows(rng, tuple(cards[n] for n in scope)))
    return DiscreteSCM(g, cards, latents, mechanisms, priors)


def _check_size(m: DiscreteSCM):
    cells = reduce(mul, m.cards.values(), 1)
    if cells > MAX_CELLS:
        raise StateSpaceTooLarge(f"{cells} cells exceed the cap of {MAX_CELLS}")


def interventional(m: DiscreteSCM, x=None) -> JointTable:
    """Joint of the observed variables after do(x); ``x`` maps node -> state."""
    x = dict(x or {})
    key = tuple(sorted(x.items()))
    if key in m._cache:
        return m._cache[key]
    for n, s in x.items():
        if n not in m.diagram:
            raise InvalidAssignment(f"{n!r} is not a node")
        if not (isinstance(s, (int, np.integer)) and 0 <= s < m.cards[n]):
            raise InvalidAssignment(f"state {s!r} out of range for {n!r}")
    _check_size(m)
    factors = list(m.priors.values())
    for v in m.diagram.nodes:
        if v in x:
            point = np.zeros(m.cards[v])
            point[x[v]] = 1.0
            factors.append(Factor((v,), point))
        else:
            factors.append(m.mechanisms[v])
    table = JointTable(tuple(m.diagram.nodes), _einsum(factors, m.diagram.nodes))
    m._cache[key] = table
    return table


def observational_joint(m: DiscreteSCM) -> JointTable:
    return interventional(m, {})


def sample(m: DiscreteSCM, n: int, seed=0) -> np.ndarray:
    """Forward-sample ``n`` rows of observed states (columns in diagram order)."""
    rng = np.random.default_rng(seed)
    values = {}
    for u, prior in m.priors.items():
        values[u] = rng.choice(m.cards[u], size=n, p=prior.values)
    from .graph import topological_order

    for v in topological_order(m.diagram):
        mech = m.mechanisms[v]
        rows = mech.values[tuple(values[p] for p in mech.variables[:-1])]
        cum = rows.cumsum(axis=-1)
        draw = rng.random(n)[:, None]
        values[v] = np.minimum((draw > cum).sum(axis=-1), m.cards[v] - 1)
    return np.stack([values[v] for v in m.diagram.nodes], axis=1)


# -- expression evaluation --------------------------------------------------------------


class _Evaluator:
    def __init__(self, joint: Factor):
        self.joint = joint
        self.cards = joint.cards
        self.cache = {}

    def marginal(self, names):
        key = tuple(names)
        if key not in self.cache:
            self.cache[key] = self.joint.marginal(names)
        return self.cache[key]

    def __call__(self, e: Expression) -> Factor:
        if isinstance(e, Atomic):
            missing = set(e.var + e.cond) - set(self.cards)
            if missing:
                raise UnknownVariable(f"{sorted(missing)} not in the joint table")
            f = self.marginal(e.var + e.cond)
            if e.cond:
                f = divide(f, self.marginal(e.cond))
        elif isinstance(e, Product):
            f = multiply([self(c) for c in e.children])
        else:
            f = divide(self(e.numerator), self(e.divisor))
        if e.sumset:
            vacuous = [v for v in e.sumset if v not in f.variables]
            f = f.sum_out(set(e.sumset))
            for v in vacuous:
                f = Factor(f.variables, f.values * self.cards[v])
        return f


def evaluate_expression(e: Expression, joint: Factor, context=None) -> Factor:
    """Numeric value of ``e`` as a Factor over its free variables.

    ``context`` (name -> Marker) is optional; when given, a free variable
    of ``e`` marked as summation-bound is an error.
    """
    if context is not None:
        bad = [v for v in free_variables(e) if context.get(v) is Marker.BOUND]
        if bad:
            raise UnknownVariable(f"{sorted(bad)} are free in the expression but marked bound")
    return _Evaluator(joint)(e)


# -- verification harness ------------------------------------------------------------------


def true_effect(m: DiscreteSCM, q: Query) -> Factor:
    """P_x(y | z) for every x, as a Factor over x + y + z (diagram order within each)."""
    g = m.diagram
    xs, ys, zs = g.sort(q.x), g.sort(q.y), g.sort(q.z)
    out = np.zeros(tuple(m.cards[v] for v in xs + ys + zs))
    for states in itertools.product(*(range(m.cards[v]) for v in xs)):
        joint = interventional(m, dict(zip(xs, states)))
        f = joint.marginal(ys + zs)
        if zs:
            f = divide(f, joint.marginal(zs))
        out[states] = f.aligned(ys + zs)
    return Factor(xs + ys + zs, out)


def deviation(e: Expression, m: DiscreteSCM, q: Query) -> float:
    """Max absolute gap between ``e`` evaluated on the observational joint and the truth.

    Free variables of ``e`` outside the query (interventions added because
    they cannot affect y) must not matter: every value of them is checked.
    """
    truth = true_effect(m, q)
    got = evaluate_expression(e, observational_joint(m))
    extra = tuple(v for v in got.variables if v not in truth.variables)
    if set(extra) & set(m.latents):
        raise UnknownVariable(f"expression mentions latent variables {sorted(extra)}")
    axes = truth.variables + extra
    ones = Factor(axes, np.ones(tuple(m.cards[v] for v in axes)))
    got = multiply([got, ones])
    want = multiply([truth, ones])
    return float(np.max(np.abs(got.aligned(axes) - want.aligned(axes))))


@dataclass
class VerifyReport:
    query: Query
    identifiable: bool
    passed: bool
    max_deviation: float = 0.0
    n_models: int = 0
    result: IdentResult = None

    def to_dict(self):
        from .expr import to_json

        d = {
            "query": {k: sorted(getattr(self.query, k)) for k in ("y", "x", "z")},
            "identifiable": self.identifiable,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "n_models": self.n_models,
        }
        if self.result is not None and self.result.identifiable:
            d["expression"] = to_json(self.result.expression)
        elif self.result is not None:
            d["hedge"] = self.result.hedge.to_dict()
        return d


def verify_query(g: CausalDiagram, q: Query, n_models=20, seed=0, cardinalities=2, tol=1e-9,
                 result=None, models=None, **ident_options) -> VerifyReport:
    """Identify ``q`` and check the outcome.

    Identifiable: the expression must match the truth on ``n_models`` seeded
    models to within ``tol``. Otherwise the hedge must verify structurally.
    """
    if result is None:
        result = identify(q, g, **ident_options)
    if not result.identifiable:
        ok = verify_hedge(g, result.hedge)
        return VerifyReport(q, False, ok, 0.0, 0, result)
    if models is None:
        models = [random_scm(g, cardinalities, seed + i) for i in range(n_models)]
    worst = max(deviation(result.expression, m, q) for m in models)
    return VerifyReport(q, True, worst <= tol, worst, len(models), result)


# -- exhaustive sweep --------------------------------------------------------------------


def enumerate_diagrams(max_nodes=4, max_bidirected=2):
    """Every diagram on nodes ``v1..vn`` (n <= max_nodes) with edges ``vi -> vj`` only for i < j.

    Fixing the order loses no generality for a sweep that tries every query
    pair, since any DAG is a relabelling of one of these.
    """
    from .graph import build_diagram

    for n in range(1, max_nodes + 1):
        names = [f"v{i + 1}" for i in range(n)]
        pairs = list(itertools.combinations(names, 2))
        for mask in range(1 << len(pairs)):
            directed = [p for i, p in enumerate(pairs) if mask >> i & 1]
            for k in range(max_bidirected + 1):
                for bi in itertools.combinations(pairs, k):
                    yield build_diagram(names, directed, bi)


@dataclass
class SweepReport:
    graphs: int = 0
    queries: int = 0
    identifiable: int = 0
    hedges: int = 0
    max_deviation: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures


def soundness_sweep(max_nodes=4, max_bidirected=2, n_models=20, seed=0, tol=1e-9) -> SweepReport:
    """verify_query on every single-cause single-effect query of every enumerated diagram."""
    rep = SweepReport()
    for g in enumerate_diagrams(max_nodes, max_bidirected):
        rep.graphs += 1
        models = None
        for x, y in itertools.permutations(g.nodes, 2):
            q = Query(frozenset([y]), frozenset([x]))
            result = identify(q, g)
            if result.identifiable and models is None:
                models = [random_scm(g, 2, seed + i) for i in range(n_models)]
            r = verify_query(g, q, tol=tol, result=result, models=models)
            rep.queries += 1
            if r.identifiable:
                rep.identifiable += 1
            else:
                rep.hedges += 1
            rep.max_deviation = max(rep.max_deviation, r.max_deviation)
            if not r.passed:
                rep.failures.append((g, q, r.max_deviation))
    return rep
