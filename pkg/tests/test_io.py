import io
from pathlib import Path

import pytest

from causalid.errors import (
    DanglingEdge, DirectedCycle, EmptyGraph, MalformedXML, MixedNotation, ParseError, SelfLoop,
    UnpairedInternalEdge,
)
from causalid.expr import Atomic, Fraction, Product
from causalid.io.dsl import parse_dsl, render_dsl
from causalid.io.graphml import parse_graphml, write_graphml
from causalid.io.render import render, to_latex, to_text
from example_graphs import frontdoor, tangled

DATA = Path(__file__).parent / "data"


# -- dsl ------------------------------------------------------------------------------------

def test_dsl_frontdoor():
    assert parse_dsl("W -> X, W -> Z, X -> Z, Z -> Y, X <-> Y") == frontdoor()


def test_dsl_files_match_fixtures():
    assert parse_dsl((DATA / "frontdoor.dsl").read_text()) == frontdoor()
    assert parse_dsl((DATA / "tangled.dsl").read_text()) == tangled()


def test_dsl_comments_and_bare_nodes():
    g = parse_dsl("# header\nQ\nA -> B  # trailing\n\n")
    assert g.nodes == ("Q", "A", "B") and g.directed == (("A", "B"),)


@pytest.mark.parametrize("text, error", [
    ("", EmptyGraph),
    ("  # nothing\n", EmptyGraph),
    ("A -> A", SelfLoop),
    ("A -> B, B -> A", DirectedCycle),
])
def test_dsl_semantic_errors(text, error):
    with pytest.raises(error):
        parse_dsl(text)


@pytest.mark.parametrize("text, line, column", [
    ("A ->", 1, 5),
    ("A B", 1, 3),
    ("-> B", 1, 1),
    ("A -> B -> C", 1, 8),
    ("A\nB $ C", 2, 3),
])
def test_dsl_syntax_errors_have_positions(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_dsl(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert f"line {line}, column {column}" in str(info.value)


def test_render_dsl_round_trip():
    assert parse_dsl(render_dsl(tangled())) == tangled()


# -- graphml --------------------------------------------------------------------------------

def test_yed_file_in_standard_notation():
    assert parse_graphml(DATA / "frontdoor_yed.graphml") == frontdoor()


def test_internal_file():
    assert parse_graphml(DATA / "frontdoor_internal.graphml", "internal") == frontdoor()


def test_accepts_str_bytes_and_file_objects():
    doc = write_graphml(frontdoor())
    assert parse_graphml(doc) == frontdoor()
    assert parse_graphml(doc.encode()) == frontdoor()
    assert parse_graphml(io.BytesIO(doc.encode())) == frontdoor()


def test_bare_graphml_without_namespace():
    doc = """<graphml><graph edgedefault="undirected">
      <node id="a"/><node id="b"/><node id="c"/>
      <edge source="a" target="b" directed="true"/>
      <edge source="b" target="c"/>
    </graph></graphml>"""
    g = parse_graphml(doc)
    assert g.nodes == ("v1", "v2", "v3")
    assert g.directed == (("v1", "v2"),) and g.bidirected == (("v2", "v3"),)


def test_name_override_and_synthesised_names():
    g = parse_graphml(DATA / "frontdoor_yed.graphml", names=["a", "b", "c", "d"])
    assert g.nodes == ("a", "b", "c", "d")
    g = parse_graphml(DATA / "frontdoor_yed.graphml", use_names=False)
    assert g.nodes == ("v1", "v2", "v3", "v4")
    with pytest.raises(ParseError):
        parse_graphml(DATA / "frontdoor_yed.graphml", names=["a"])


def test_yed_single_source_arrow_reverses_edge():
    doc = """<graphml xmlns:y="http://www.yworks.com/xml/graphml"><graph>
      <node id="a"/><node id="b"/>
      <edge source="a" target="b"><data key="g"><y:PolyLineEdge>
        <y:Arrows source="standard" target="none"/></y:PolyLineEdge></data></edge>
    </graph></graphml>"""
    assert parse_graphml(doc).directed == (("v2", "v1"),)


def _internal(*edges):
    body = "".join(
        f'<edge source="{a}" target="{b}">' + ('<data key="d">U</data>' if u else "") + "</edge>"
        for a, b, u in edges
    )
    return ('<graphml><key id="d" for="edge" attr.name="description"/><graph>'
            '<node id="X"/><node id="Y"/>' + body + "</graph></graphml>")


def test_internal_pair_collapses():
    g = parse_graphml(_internal(("X", "Y", True), ("Y", "X", True)), "internal")
    assert g.bidirected == (("v1", "v2"),) and not g.directed


def test_internal_pair_plus_directed_edge():
    g = parse_graphml(_internal(("X", "Y", False), ("X", "Y", True), ("Y", "X", True)), "internal")
    assert g.directed == (("v1", "v2"),) and g.bidirected == (("v1", "v2"),)


@pytest.mark.parametrize("doc, notation, error", [
    (_internal(("X", "Y", True)), "internal", UnpairedInternalEdge),
    (_internal(("X", "Y", True), ("Y", "X", True)), "standard", MixedNotation),
    ('<graphml><graph><node id="a"/><node id="b"/><edge source="a" target="b" directed="false"/>'
     "</graph></graphml>", "internal", MixedNotation),
    ('<graphml><graph><node id="a"/><edge source="a" target="q"/></graph></graphml>', "standard", DanglingEdge),
    ("<graphml><graph>", "standard", MalformedXML),
    ("<graphml/>", "standard", MalformedXML),
])
def test_graphml_errors(doc, notation, error):
    with pytest.raises(error):
        parse_graphml(doc, notation)


def test_malformed_xml_reports_position():
    with pytest.raises(MalformedXML) as info:
        parse_graphml("<graphml>\n<graph>\n</graphml>")
    assert info.value.line == 3


# -- render ---------------------------------------------------------------------------------

def test_atomic_renders_the_same_everywhere():
    e = Atomic(("Y",), ("X",))
    assert to_latex(e) == to_text(e) == "P(Y|X)"
    assert render(e, "json") == '{"cond": ["X"], "sumset": [], "type": "atomic", "var": ["Y"]}'


def test_text_format():
    e = Product((Fraction(Atomic(("A",)), Atomic(("A",), (), ("A",))), Atomic(("B",))), ("B",))
    assert to_text(e) == "(sum_{B} [P(A)] / [(sum_{A} P(A))]P(B))"
    assert to_latex(e) == r"\left(\sum_{B}\frac{P(A)}{\left(\sum_{A}P(A)\right)}P(B)\right)"


def test_unknown_format():
    with pytest.raises(ValueError):
        render(Atomic(("A",)), "html")
