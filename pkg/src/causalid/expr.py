"""Symbolic probability expressions.

Three node kinds, each carrying a (possibly empty) summation set:

* ``Atomic``   P(var | cond)
* ``Product``  the product of its children
* ``Fraction`` numerator / divisor

A summation binds its variables for the whole node it is attached to. A
name bound by an inner sum is a different variable from the same name
free outside it (innermost binder wins), which is how an intervention value
``X`` and a summation index ``X`` can share a letter.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Union

from .errors import EmptyVar, OverlappingVarCond, UnknownVariable


@dataclass(frozen=True)
class Atomic:
    var: tuple
    cond: tuple = ()
    sumset: tuple = ()


@dataclass(frozen=True)
class Product:
    children: tuple
    sumset: tuple = ()


@dataclass(frozen=True)
class Fraction:
    numerator: "Expression"
    divisor: "Expression"
    sumset: tuple = ()


Expression = Union[Atomic, Product, Fraction]


class Marker(Enum):
    FIXED = "fixed"
    BOUND = "bound"
    FREE = "free"


def atomic(var, cond=()) -> Atomic:
    var, cond = tuple(var), tuple(cond)
    if not var:
        raise EmptyVar("an atomic term needs at least one variable")
    shared = set(var) & set(cond)
    if shared:
        raise OverlappingVarCond(f"{sorted(shared)} both distributed and conditioned on")
    return Atomic(var, cond)


def product(children, sumset=()) -> Expression:
    children = tuple(children)
    if not children:
        raise ValueError("empty product")
    if len(children) == 1:
        return with_sumset(children[0], sumset)
    return Product(children, tuple(sumset))


def _union(first, second, order=None):
    out = list(first) + [v for v in second if v not in first]
    if order is not None:
        out.sort(key=order)
    return tuple(out)


def with_sumset(e: Expression, names: Iterable[str], order=None) -> Expression:
    """Sum ``e`` over ``names`` without simplifying anything.

    ``order`` is an optional sort key for the combined summation set.
    """
    names = tuple(names)
    if not names:
        return e
    return replace(e, sumset=_union(e.sumset, names, order))


def free_variables(e: Expression) -> frozenset:
    if isinstance(e, Atomic):
        inner = set(e.var) | set(e.cond)
    elif isinstance(e, Product):
        inner = set().union(*(free_variables(c) for c in e.children))
    else:
        inner = free_variables(e.numerator) | free_variables(e.divisor)
    return frozenset(inner - set(e.sumset))


def appearance_order(e: Expression) -> list:
    """Every variable name in ``e``, in order of first textual appearance."""
    seen = {}

    def walk(n):
        for v in n.sumset:
            seen.setdefault(v, None)
        if isinstance(n, Atomic):
            for v in n.var + n.cond:
                seen.setdefault(v, None)
        elif isinstance(n, Product):
            for c in n.children:
                walk(c)
        else:
            walk(n.numerator)
            walk(n.divisor)

    walk(e)
    return list(seen)


def value_context(e: Expression, fixed=()) -> dict:
    """Mark every variable of ``e`` as fixed, summation-bound or free.

    A name both bound somewhere and free at the top is reported by its
    top-level role.
    """
    fixed = set(fixed)
    free = free_variables(e)
    ctx = {}
    for v in appearance_order(e):
        if v in free:
            ctx[v] = Marker.FIXED if v in fixed else Marker.FREE
        else:
            ctx[v] = Marker.BOUND
    return ctx


# -- simplification -----------------------------------------------------------


def _flatten(children):
    out = []
    for c in children:
        if isinstance(c, Product) and not c.sumset:
            out.extend(c.children)
        else:
            out.append(c)
    return out


def normalize(e: Expression) -> Expression:
    """Structural clean-up only: splice sum-free products into their parent."""
    if isinstance(e, Atomic):
        return e
    if isinstance(e, Fraction):
        return replace(e, numerator=normalize(e.numerator), divisor=normalize(e.divisor))
    children = _flatten(normalize(c) for c in e.children)
    if len(children) == 1:
        return _merge_single(children[0], e.sumset)
    return Product(tuple(children), e.sumset)


def _merge_single(child, sumset):
    if not sumset:
        return child
    if set(child.sumset) & set(sumset):
        return Product((child,), sumset)
    return replace(child, sumset=tuple(sumset) + child.sumset)


def _sum_out_normalized(children, bound):
    """Drop sum indices that only occur as a distributed variable of one plain atomic term."""
    children = list(children)
    bound = list(bound)
    changed = True
    while changed:
        changed = False
        for v in reversed(bound):
            users = [i for i, c in enumerate(children) if v in free_variables(c)]
            if len(users) != 1:
                continue
            c = children[users[0]]
            if not isinstance(c, Atomic) or c.sumset or v not in c.var:
                continue
            rest = tuple(n for n in c.var if n != v)
            if rest:
                children[users[0]] = Atomic(rest, c.cond)
            else:
                del children[users[0]]
            bound.remove(v)
            changed = True
            break
    return children, bound


def _factors(e: Expression) -> list:
    """Split ``e`` into factors whose product is ``e``, pulling constants out of sums."""
    if isinstance(e, Product) and not e.sumset:
        return [f for c in e.children for f in _factors(c)]
    if not isinstance(e, Product):
        return [e]
    children, bound = _sum_out_normalized(_flatten(e.children), e.sumset)
    if not bound:
        return [f for c in children for f in _factors(c)]
    bset = set(bound)
    used = set().union(*(free_variables(c) for c in children)) if children else set()
    if not bset <= used:
        # a vacuous index scales the value; leave the node alone
        return [e]
    outside = [c for c in children if not free_variables(c) & bset]
    inside = [c for c in children if free_variables(c) & bset]
    inner = Product(tuple(inside), tuple(bound)) if len(inside) > 1 else _merge_single(inside[0], tuple(bound))
    return [f for c in outside for f in _factors(c)] + [inner]


def _rebuild(factors):
    if len(factors) == 1:
        return factors[0]
    return Product(tuple(factors))


def _simplify_fraction(num, den, sumset):
    nf, df = _factors(num) or [num], _factors(den)
    if not df:
        return with_sumset(_rebuild(nf), sumset)
    rest = list(nf)
    left = []
    for f in df:
        if f in rest:
            rest.remove(f)
        else:
            left.append(f)
    if not rest:
        # 1/den has no representation; keep the factored pair
        rest, left = nf, df
    if not left:
        return with_sumset(_rebuild(rest), sumset)
    return Fraction(_rebuild(rest), _rebuild(left), tuple(sumset))


def simplify(e: Expression) -> Expression:
    """Value-preserving rewrite to a fixpoint.

    Products are flattened everywhere. Inside a fraction the numerator and
    divisor are also factored: terms free of a summation index move out of
    the sum, an index appearing only as the distributed variable of a
    single term is summed away, and identical top-level factors of the
    numerator and divisor cancel.
    """
    if isinstance(e, Atomic):
        return e
    if isinstance(e, Product):
        children = _flatten(simplify(c) for c in e.children)
        if len(children) == 1:
            return _merge_single(children[0], e.sumset)
        return Product(tuple(children), e.sumset)
    return _simplify_fraction(simplify(e.numerator), simplify(e.divisor), e.sumset)


def marginalize(e: Expression, names, order=None) -> Expression:
    names = tuple(names)
    if not names:
        return e
    return simplify(with_sumset(e, names, order))


def conditional(e: Expression, given, order=None) -> Expression:
    """e divided by its own marginal over everything outside ``given``.

    When nothing is left to sum the expression is already normalised in
    the requested sense and comes back unchanged.
    """
    free = free_variables(e)
    given = set(given)
    if not given <= free:
        raise UnknownVariable(f"{sorted(given - free)} not free in the expression")
    summed = [v for v in appearance_order(e) if v in free and v not in given]
    if order is not None:
        summed.sort(key=order)
    if not summed:
        return e
    return simplify(Fraction(e, with_sumset(e, summed, order)))


# -- JSON -----------------------------------------------------------------------


def to_json(e: Expression) -> dict:
    if isinstance(e, Atomic):
        return {"type": "atomic", "var": list(e.var), "cond": list(e.cond), "sumset": list(e.sumset)}
    if isinstance(e, Product):
        return {"type": "product", "children": [to_json(c) for c in e.children], "sumset": list(e.sumset)}
    return {
        "type": "fraction",
        "numerator": to_json(e.numerator),
        "divisor": to_json(e.divisor),
        "sumset": list(e.sumset),
    }


def from_json(d: dict) -> Expression:
    kind = d["type"]
    sumset = tuple(d.get("sumset", ()))
    if kind == "atomic":
        return Atomic(tuple(d["var"]), tuple(d.get("cond", ())), sumset)
    if kind == "product":
        return Product(tuple(from_json(c) for c in d["children"]), sumset)
    if kind == "fraction":
        return Fraction(from_json(d["numerator"]), from_json(d["divisor"]), sumset)
    raise ValueError(f"unknown expression type {kind!r}")
