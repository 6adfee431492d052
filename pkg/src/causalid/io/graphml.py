"""GraphML import and a minimal export.

Two conventions for a latent confounder are understood:

* ``standard``: an edge element that is not directed. That is either an
  edge with ``directed="false"`` (or in an undirected graph), or a yEd edge
  drawn with arrowheads on both ends.
* ``internal``: two opposite directed edges, each with a ``description``
  data value of ``U``.

Visual attributes are ignored. Namespaces are stripped, so both plain and
namespaced documents parse.
"""

from __future__ import annotations

import io
import xml.etree.ElementTree as ET

from ..errors import DanglingEdge, MalformedXML, MixedNotation, ParseError, UnpairedInternalEdge
from ..graph import CausalDiagram, build_diagram

STANDARD = "standard"
INTERNAL = "internal"
NOTATIONS = (STANDARD, INTERNAL)

_NAME_KEYS = ("name", "label")


def _local(tag):
    return tag.rsplit("}", 1)[-1]


def _strip(root):
    for el in root.iter():
        el.tag = _local(el.tag)
        el.attrib = {_local(k): v for k, v in el.attrib.items()}
    return root


def _load(document):
    if isinstance(document, str) and document.lstrip().startswith("<"):
        document = document.encode()
    if isinstance(document, (bytes, bytearray)):
        document = io.BytesIO(document)
    try:
        root = ET.parse(document).getroot()
    except ET.ParseError as e:
        line, col = e.position
        reason = str(e).rsplit(": line", 1)[0]
        raise MalformedXML(f"not well-formed XML: {reason}", line, col + 1) from None
    return _strip(root)


def _keys(root):
    """Map key id -> (domain, attribute name) for every <key>."""
    out = {}
    for k in root.iter("key"):
        name = k.get("attr.name") or k.get("yfiles.type") or k.get("id")
        out[k.get("id")] = (k.get("for", "all"), name.lower())
    return out


def _data(el, keys, domain):
    out = {}
    for d in el.findall("data"):
        dom, name = keys.get(d.get("key"), ("all", (d.get("key") or "").lower()))
        if dom in (domain, "all"):
            out[name] = d
    return out


def _node_label(el, keys):
    data = _data(el, keys, "node")
    for k in _NAME_KEYS:
        if k in data and (data[k].text or "").strip():
            return data[k].text.strip()
    for lab in el.iter("NodeLabel"):
        if (lab.text or "").strip():
            return lab.text.strip()
    return None


def _edge_kind(el, default_directed):
    """'directed', 'reversed' or 'bidirected' for one edge element."""
    arrows = next(el.iter("Arrows"), None)
    if arrows is not None:
        src = arrows.get("source", "none") != "none"
        tgt = arrows.get("target", "none") != "none"
        if src and tgt or not (src or tgt):
            return "bidirected"
        return "reversed" if src else "directed"
    flag = el.get("directed")
    directed = default_directed if flag is None else flag.lower() == "true"
    return "directed" if directed else "bidirected"


def parse_graphml(document, notation=STANDARD, names=None, use_names=True) -> CausalDiagram:
    """Read a diagram from a GraphML document.

    ``document`` is a path, a binary file object, bytes, or a str holding
    the XML itself (recognised by its leading ``<``).

    ``names`` replaces the node names in document order. Without it, names
    come from a ``name``/``label`` data key or a yEd node label, and
    ``v1..vn`` are used when ``use_names`` is false or a node has none.
    """
    if notation not in NOTATIONS:
        raise ValueError(f"notation must be one of {NOTATIONS}")
    root = _load(document)
    graph = root if root.tag == "graph" else root.find("graph")
    if graph is None:
        raise MalformedXML("no <graph> element")
    keys = _keys(root)
    default_directed = graph.get("edgedefault", "directed") == "directed"

    node_els = list(graph.iter("node"))
    if names is not None:
        names = list(names)
        if len(names) != len(node_els):
            raise ParseError(f"{len(names)} names given for {len(node_els)} nodes")
    labels = {}
    for i, el in enumerate(node_els):
        nid = el.get("id")
        if nid is None:
            raise MalformedXML(f"node {i + 1} has no id")
        if nid in labels:
            raise MalformedXML(f"duplicate node id {nid!r}")
        if names is not None:
            labels[nid] = names[i]
        else:
            label = _node_label(el, keys) if use_names else None
            labels[nid] = label or f"v{i + 1}"
    if len(set(labels.values())) != len(labels):
        raise ParseError("node names are not unique")

    directed, bidirected, marked = [], [], []
    for el in graph.iter("edge"):
        s, t = el.get("source"), el.get("target")
        for end in (s, t):
            if end not in labels:
                raise DanglingEdge(f"edge refers to unknown node {end!r}")
        a, b = labels[s], labels[t]
        kind = _edge_kind(el, default_directed)
        desc = _data(el, keys, "edge").get("description")
        is_u = desc is not None and (desc.text or "").strip() == "U"
        if notation == STANDARD:
            if is_u:
                raise MixedNotation(f"edge {a} -> {b} is U-marked; use notation='internal'")
            if kind == "bidirected":
                bidirected.append((a, b))
            else:
                directed.append((a, b) if kind == "directed" else (b, a))
        else:
            if kind == "bidirected":
                raise MixedNotation(f"edge {a} -- {b} is not directed; use notation='standard'")
            if kind == "reversed":
                a, b = b, a
            (marked if is_u else directed).append((a, b))

    present = set(marked)
    for a, b in marked:
        if (b, a) not in present:
            raise UnpairedInternalEdge(f"U-edge {a} -> {b} has no reverse {b} -> {a}")
        bidirected.append((a, b))
    return build_diagram(list(labels.values()), directed, bidirected)


def write_graphml(g: CausalDiagram, notation=STANDARD) -> str:
    """Plain GraphML for ``g``; no layout information."""
    if notation not in NOTATIONS:
        raise ValueError(f"notation must be one of {NOTATIONS}")
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    ET.SubElement(root, "key", {"id": "d0", "for": "node", "attr.name": "name", "attr.type": "string"})
    ET.SubElement(root, "key", {"id": "d1", "for": "edge", "attr.name": "description", "attr.type": "string"})
    graph = ET.SubElement(root, "graph", id="G", edgedefault="directed")
    ids = {}
    for i, n in enumerate(g.nodes):
        ids[n] = f"n{i}"
        ET.SubElement(ET.SubElement(graph, "node", id=ids[n]), "data", key="d0").text = n

    def edge(a, b, **attrs):
        return ET.SubElement(graph, "edge", source=ids[a], target=ids[b], **attrs)

    for a, b in g.directed:
        edge(a, b)
    for a, b in g.bidirected:
        if notation == STANDARD:
            edge(a, b, directed="false")
        else:
            ET.SubElement(edge(a, b), "data", key="d1").text = "U"
            ET.SubElement(edge(b, a), "data", key="d1").text = "U"
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"
