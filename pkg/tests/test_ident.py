import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalid import ident
from causalid.ccomp import verify_hedge
from causalid.errors import InvalidQuery
from causalid.expr import Atomic, Fraction
from causalid.ident import IdentResult, Query, Trace, identify
from causalid.io.render import to_latex
from causalid.oracle import deviation, random_scm, verify_query
from example_graphs import (
    FRONTDOOR_CONDITIONAL_LATEX, FRONTDOOR_LATEX, HEDGE_MESSAGE, bow, frontdoor, hedged, tangled, two_paths,
)
from strategies import diagrams


def test_frontdoor_effect():
    assert to_latex(identify(Query({"Y"}, {"X"}), frontdoor()).expression) == FRONTDOOR_LATEX


def test_frontdoor_conditional_effect():
    r = identify(Query({"Z"}, {"X"}, {"W"}), frontdoor())
    assert to_latex(r.expression) == FRONTDOOR_CONDITIONAL_LATEX


def test_hedged_hedge():
    r = identify(Query({"Y"}, {"X"}), hedged())
    assert not r.identifiable
    assert r.hedge.message() == HEDGE_MESSAGE
    assert verify_hedge(hedged(), r.hedge)


def test_bow_arc_is_not_identifiable():
    r = identify(Query({"Y"}, {"X"}), bow())
    assert r.hedge.F == ("X", "Y") and r.hedge.F_prime == ("Y",)


def test_two_paths_pruning_switch():
    q = Query({"y"}, {"x", "w"})
    assert identify(q, two_paths()).expression == Atomic(("y",), ("x", "w"))
    assert identify(q, two_paths(), prune=False).expression == Atomic(("y",), ("z", "x", "w"))


def test_two_paths_conditional_promotes_w():
    # (y indep w | x) once x's inputs and w's outputs are cut, so w becomes an
    # intervention and id returns P(y|x,w); idc then normalises over y
    inner = identify(Query({"y"}, {"x", "w"}), two_paths()).expression
    r = identify(Query({"y"}, {"x"}, {"w"}), two_paths())
    assert r.expression == Fraction(inner, Atomic(("y",), ("x", "w"), ("y",)))
    assert verify_query(two_paths(), Query({"y"}, {"x"}, {"w"}), n_models=5).passed


def test_no_intervention_marginalises():
    g = frontdoor()
    assert identify(Query(set(g.nodes)), g).expression == Atomic(g.nodes)
    assert identify(Query({"Y"}), g).expression == Atomic(("Y",))


@pytest.mark.parametrize("q", [
    Query(set(), {"X"}),
    Query({"Y"}, {"Y"}),
    Query({"Y"}, {"X"}, {"X"}),
    Query({"Q"}, {"X"}),
])
def test_invalid_queries(q):
    with pytest.raises(InvalidQuery):
        identify(q, frontdoor())


def test_result_holds_exactly_one_outcome():
    with pytest.raises(ValueError):
        IdentResult()


def test_trace_reports_one_line_per_call():
    t = Trace()
    identify(Query({"Z_1", "Z_2", "Z_3", "Y"}, {"X"}), tangled(), trace=t)
    assert all(line in range(1, 8) for _, line in t.calls)
    assert {line for _, line in t.calls} >= {4, 6, 7}


def test_idc_with_empty_z_is_id():
    g = tangled()
    P = Atomic(g.nodes)
    for y in g.nodes:
        for x in g.nodes:
            if x != y:
                assert ident.idc({y}, {x}, set(), P, g) == ident.id({y}, {x}, P, g)


@settings(max_examples=200, deadline=None)
@given(diagrams(min_nodes=2, max_nodes=6), st.data())
def test_single_line_dispatch_and_depth_bound(g, data):
    y = data.draw(st.sampled_from(g.nodes))
    x = data.draw(st.sampled_from([n for n in g.nodes if n != y]))
    t = Trace()
    identify(Query({y}, {x}), g, trace=t)
    assert all(line is not None for _, line in t.calls)
    assert t.max_depth <= 2 * len(g.nodes)


@settings(max_examples=150, deadline=None)
@given(diagrams(min_nodes=2, max_nodes=6, max_bidirected=3), st.data())
def test_soundness_on_random_diagrams(g, data):
    y = data.draw(st.sampled_from(g.nodes))
    x = data.draw(st.sampled_from([n for n in g.nodes if n != y]))
    report = verify_query(g, Query({y}, {x}), n_models=3, seed=data.draw(st.integers(0, 10**6)))
    assert report.passed, report.to_dict()


@settings(max_examples=100, deadline=None)
@given(diagrams(min_nodes=2, max_nodes=5, max_bidirected=2), st.data())
def test_ancestral_modes_agree(g, data):
    y = data.draw(st.sampled_from(g.nodes))
    x = data.draw(st.sampled_from([n for n in g.nodes if n != y]))
    q = Query({y}, {x})
    a = identify(q, g)
    b = identify(q, g, ancestral="marginalize")
    assert a.identifiable == b.identifiable
    if a.identifiable:
        m = random_scm(g, 2, seed=1)
        assert deviation(a.expression, m, q) < 1e-9
        assert deviation(b.expression, m, q) < 1e-9


@settings(max_examples=100, deadline=None)
@given(diagrams(min_nodes=3, max_nodes=5, max_bidirected=2), st.data())
def test_conditional_soundness(g, data):
    y, x, z = data.draw(st.permutations(g.nodes))[:3]
    report = verify_query(g, Query({y}, {x}, {z}), n_models=3)
    assert report.passed, report.to_dict()
