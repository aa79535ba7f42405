"""JSON documents for graphs and templates, and DOT export.

Graph document::

    {"vertices": [{"id": "u1", "label": {"kind": "saddle", "matrix": [[1]]}}, ...],
     "edges": [{"id": "e1", "from": "R", "to": "u1", "weight": 1}, ...]}

Template document::

    {"charts": [{"id": "J", "kind": "joining"}, ...],
     "strips": [{"from": ["J", "out"], "to": ["S", "in"], "twist": 0}, ...]}

Schema problems raise :class:`DocumentError` carrying a JSON-pointer-like
location.  Structural problems that the schema allows (cycles, imbalance,
dangling ports) are left to the validators.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .gf2 import IntMatrix
from .graph import AttractorOrbit, Edge, LyapunovGraph, RepellerOrbit, Saddle, Singularity
from .template import JOINING, PORTS, SPLITTING, Strip, Template

__all__ = [
    "DocumentError",
    "graph_from_doc",
    "graph_to_doc",
    "template_from_doc",
    "template_to_doc",
    "load_json",
    "dump_json",
    "export_dot",
    "template_to_dot",
    "parse_dot",
]

LABEL_KINDS = ("attractor", "repeller", "saddle", "singularity")
SHAPES = {"attractor": "doublecircle", "repeller": "circle", "saddle": "box", "singularity": "diamond"}
_SHAPE_KIND = {v: k for k, v in SHAPES.items()}


class DocumentError(ValueError):
    def __init__(self, where: str, message: str) -> None:
        super().__init__(f"{where}: {message}")
        self.where = where
        self.message = message


def _need(obj: Any, key: str, where: str, typ, what: str):
    if not isinstance(obj, dict):
        raise DocumentError(where, "expected an object")
    if key not in obj:
        raise DocumentError(f"{where}/{key}", "missing")
    val = obj[key]
    if not isinstance(val, typ) or (typ is int and isinstance(val, bool)):
        raise DocumentError(f"{where}/{key}", f"expected {what}")
    return val


def _unknown_keys(obj: dict, allowed: set, where: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise DocumentError(where, f"unexpected key(s) {', '.join(map(repr, extra))}")


def _label_from_doc(d: Any, where: str):
    kind = _need(d, "kind", where, str, "a string")
    if kind not in LABEL_KINDS:
        raise DocumentError(f"{where}/kind", f"unknown label kind {kind!r}")
    if kind == "saddle":
        _unknown_keys(d, {"kind", "matrix"}, where)
        rows = _need(d, "matrix", where, list, "a list of integer rows")
        try:
            return Saddle(IntMatrix.of(rows))
        except (ValueError, TypeError) as exc:
            raise DocumentError(f"{where}/matrix", str(exc)) from None
    if "matrix" in d:
        raise DocumentError(f"{where}/matrix", f"only saddle labels carry a matrix, not {kind}")
    if kind == "singularity":
        _unknown_keys(d, {"kind", "index"}, where)
        idx = _need(d, "index", where, int, "an integer 0..3")
        if not 0 <= idx <= 3:
            raise DocumentError(f"{where}/index", f"index {idx} outside 0..3")
        return Singularity(idx)
    if "index" in d:
        raise DocumentError(f"{where}/index", f"only singularity labels carry an index, not {kind}")
    _unknown_keys(d, {"kind"}, where)
    return AttractorOrbit() if kind == "attractor" else RepellerOrbit()


def _label_to_doc(lab) -> dict:
    if isinstance(lab, Saddle):
        return {"kind": "saddle", "matrix": lab.matrix.tolist()}
    if isinstance(lab, Singularity):
        return {"kind": "singularity", "index": lab.index}
    return {"kind": "attractor" if isinstance(lab, AttractorOrbit) else "repeller"}


def graph_from_doc(doc: Any) -> LyapunovGraph:
    if not isinstance(doc, dict):
        raise DocumentError("", "graph document must be an object")
    _unknown_keys(doc, {"vertices", "edges"}, "")
    verts = _need(doc, "vertices", "", list, "a list")
    edges = _need(doc, "edges", "", list, "a list")
    labels: dict = {}
    for i, v in enumerate(verts):
        where = f"/vertices/{i}"
        vid = _need(v, "id", where, str, "a string")
        _unknown_keys(v, {"id", "label"}, where)
        if vid in labels:
            raise DocumentError(f"{where}/id", f"duplicate vertex id {vid!r}")
        labels[vid] = _label_from_doc(_need(v, "label", where, dict, "an object"), f"{where}/label")
    out = []
    seen: set = set()
    for i, e in enumerate(edges):
        where = f"/edges/{i}"
        _unknown_keys(e if isinstance(e, dict) else {}, {"id", "from", "to", "weight"}, where)
        eid = _need(e, "id", where, str, "a string")
        if eid in seen:
            raise DocumentError(f"{where}/id", f"duplicate edge id {eid!r}")
        seen.add(eid)
        src = _need(e, "from", where, str, "a vertex id")
        dst = _need(e, "to", where, str, "a vertex id")
        w = _need(e, "weight", where, int, "an integer")
        for key, end in (("from", src), ("to", dst)):
            if end not in labels:
                raise DocumentError(f"{where}/{key}", f"unknown vertex {end!r}")
        if w < 0:
            raise DocumentError(f"{where}/weight", f"weight {w} is negative")
        out.append(Edge(eid, src, dst, w))
    return LyapunovGraph(labels, out)


def graph_to_doc(L: LyapunovGraph) -> dict:
    return {
        "vertices": [{"id": v, "label": _label_to_doc(L.label(v))} for v in L.vertices],
        "edges": [{"id": e.id, "from": e.src, "to": e.dst, "weight": e.weight} for e in L.edges],
    }


def _port_ref(val: Any, where: str) -> tuple[str, str]:
    if not (isinstance(val, list) and len(val) == 2 and all(isinstance(x, str) for x in val)):
        raise DocumentError(where, "expected [chart id, port]")
    return val[0], val[1]


def template_from_doc(doc: Any) -> Template:
    if not isinstance(doc, dict):
        raise DocumentError("", "template document must be an object")
    _unknown_keys(doc, {"charts", "strips"}, "")
    charts = _need(doc, "charts", "", list, "a list")
    strips = _need(doc, "strips", "", list, "a list")
    cs = []
    ids: set = set()
    vocab = set(PORTS[JOINING]) | set(PORTS[SPLITTING])
    for i, c in enumerate(charts):
        where = f"/charts/{i}"
        _unknown_keys(c if isinstance(c, dict) else {}, {"id", "kind"}, where)
        cid = _need(c, "id", where, str, "a string")
        kind = _need(c, "kind", where, str, "a string")
        if cid in ids:
            raise DocumentError(f"{where}/id", f"duplicate chart id {cid!r}")
        if kind not in (JOINING, SPLITTING):
            raise DocumentError(f"{where}/kind", f"unknown chart kind {kind!r}")
        ids.add(cid)
        cs.append((cid, kind))
    ss = []
    for i, s in enumerate(strips):
        where = f"/strips/{i}"
        _unknown_keys(s if isinstance(s, dict) else {}, {"from", "to", "twist"}, where)
        src = _port_ref(s.get("from") if isinstance(s, dict) else None, f"{where}/from")
        dst = _port_ref(s.get("to") if isinstance(s, dict) else None, f"{where}/to")
        for key, (_, port) in (("from", src), ("to", dst)):
            if port not in vocab:
                raise DocumentError(f"{where}/{key}", f"unknown port {port!r}")
        twist = s.get("twist", 0)
        if twist not in (0, 1) or isinstance(twist, bool):
            raise DocumentError(f"{where}/twist", "twist must be 0 or 1")
        ss.append(Strip(src, dst, twist))
    return Template(cs, ss)


def template_to_doc(T: Template) -> dict:
    return {
        "charts": [{"id": c, "kind": k} for c, k in T.charts],
        "strips": [{"from": list(s.src), "to": list(s.dst), "twist": s.twist} for s in T.strips],
    }


def load_json(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# --------------------------------------------------------------------------
# DOT


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _unq(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


def export_dot(doc: dict) -> str:
    """Deterministic DOT digraph for a graph document.

    Vertex shapes encode the label kind; saddle matrices and singularity
    indices go into the ``xlabel``.  Edges carry their id and weight.
    """
    L = graph_from_doc(doc)
    lines = ["digraph lyapunov {", "  rankdir=TB;"]
    for v in L.vertices:
        lab = _label_to_doc(L.label(v))
        kind = lab["kind"]
        extra = ""
        if kind == "saddle":
            extra = " xlabel=" + _q(json.dumps(lab["matrix"], separators=(",", ":")))
        elif kind == "singularity":
            extra = " xlabel=" + _q(f"index {lab['index']}")
        lines.append(f"  {_q(v)} [shape={SHAPES[kind]}{extra}];")
    for e in L.edges:
        lines.append(f"  {_q(e.src)} -> {_q(e.dst)} [id={_q(e.id)} label=\"{e.weight}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_NODE = re.compile(r'^\s*("(?:[^"\\]|\\.)*")\s*\[shape=(\w+)(?:\s+xlabel=("(?:[^"\\]|\\.)*"))?\];$')
_ARC = re.compile(
    r'^\s*("(?:[^"\\]|\\.)*")\s*->\s*("(?:[^"\\]|\\.)*")\s*\[id=("(?:[^"\\]|\\.)*")\s+label="(\d+)"\];$'
)


def parse_dot(text: str) -> dict:
    """Inverse of :func:`export_dot` (only the dialect it writes)."""
    vertices, edges = [], []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.rstrip()
        if not line or line.strip() in ("}", "rankdir=TB;") or line.startswith("digraph"):
            continue
        m = _NODE.match(line)
        if m:
            kind = _SHAPE_KIND.get(m.group(2))
            if kind is None:
                raise DocumentError(f"line {n}", f"unknown shape {m.group(2)!r}")
            lab: dict = {"kind": kind}
            if kind == "saddle":
                lab["matrix"] = json.loads(_unq(m.group(3)))
            elif kind == "singularity":
                lab["index"] = int(_unq(m.group(3)).split()[-1])
            vertices.append({"id": _unq(m.group(1)), "label": lab})
            continue
        m = _ARC.match(line)
        if m:
            edges.append(
                {"id": _unq(m.group(3)), "from": _unq(m.group(1)), "to": _unq(m.group(2)), "weight": int(m.group(4))}
            )
            continue
        raise DocumentError(f"line {n}", "unrecognised DOT statement")
    return {"vertices": vertices, "edges": edges}


def template_to_dot(T: Template) -> str:
    """Chart/strip multigraph of a template; twisted strips are dashed."""
    lines = ["digraph template {"]
    for cid, kind in T.charts:
        lines.append(f"  {_q(cid)} [shape={'invtriangle' if kind == JOINING else 'triangle'}];")
    for s in T.strips:
        style = " style=dashed" if s.twist else ""
        lines.append(
            f"  {_q(s.src[0])} -> {_q(s.dst[0])} [taillabel={_q(s.src[1])} headlabel={_q(s.dst[1])}{style}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
