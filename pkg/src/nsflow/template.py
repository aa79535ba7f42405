"""Abstract templates and the boundary of their thickening.

A template is assembled from joining charts (ports ``in1``, ``in2`` -> ``out``;
``in1`` is the upper sheet at the branch line) and splitting charts (``in`` ->
``out1``, ``out2``; ``out1`` is the left branch).  Strips connect every
out-port to exactly one in-port, optionally with a half twist.

The thickened template is an I-bundle-like 3-manifold.  Flow contracts the
thickness direction and expands the width direction, so faces normal to the
thickness are entrance set and faces normal to the width are exit set.  Each
chart contributes a fixed inventory of boundary cells (:data:`INVENTORY`);
gluing the port rectangles along the strips gives a closed cell complex whose
entrance and exit subcomplexes, dividing curves and genera are extracted by
:func:`thicken_boundary`.

Port rectangle conventions: corners ``TL TR BL BR`` (T = thickness +, L =
width -), edges ``top bottom left right``.  A strip with twist 1 rotates the
rectangle by a half turn: top <-> bottom and left <-> right.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .graph import Diagnostic

__all__ = [
    "JOINING",
    "SPLITTING",
    "PORTS",
    "IN_PORTS",
    "OUT_PORTS",
    "Strip",
    "Template",
    "SurfaceComponent",
    "BoundaryReport",
    "TemplateError",
    "validate_template",
    "build_lorenz",
    "thicken_boundary",
    "template_genus",
    "side_terms",
    "check_lemma41",
    "enumerate_small_templates",
    "enumerate_labeled_templates",
    "canonical_form",
    "rotate_chart",
    "find_templates_with_signature",
    "boundary_signature",
]

JOINING = "joining"
SPLITTING = "splitting"
IN_PORTS = {JOINING: ("in1", "in2"), SPLITTING: ("in",)}
OUT_PORTS = {JOINING: ("out",), SPLITTING: ("out1", "out2")}
PORTS = {k: IN_PORTS[k] + OUT_PORTS[k] for k in (JOINING, SPLITTING)}
CORNERS = ("TL", "TR", "BL", "BR")
PORT_EDGES = {"top": ("TL", "TR"), "bottom": ("BL", "BR"), "left": ("TL", "BL"), "right": ("TR", "BR")}
HALF_TURN = {"TL": "BR", "BR": "TL", "TR": "BL", "BL": "TR"}
_PORT_EDGE_BY_ENDS = {frozenset(ends): name for name, ends in PORT_EDGES.items()}


class TemplateError(RuntimeError):
    """The glued boundary complex is not a closed orientable surface."""


@dataclass(frozen=True)
class Strip:
    src: tuple[str, str]
    dst: tuple[str, str]
    twist: int = 0


@dataclass(frozen=True)
class Template:
    charts: tuple[tuple[str, str], ...]
    strips: tuple[Strip, ...]

    def __init__(self, charts: Iterable[Sequence[str]], strips: Iterable) -> None:
        cs = tuple((str(c), str(k)) for c, k in charts)
        ss = []
        for s in strips:
            if not isinstance(s, Strip):
                src, dst, *rest = s
                s = Strip(tuple(src), tuple(dst), rest[0] if rest else 0)
            ss.append(s)
        object.__setattr__(self, "charts", cs)
        object.__setattr__(self, "strips", tuple(ss))

    @property
    def kinds(self) -> dict[str, str]:
        return dict(self.charts)

    @property
    def euler_char(self) -> int:
        """The template retracts onto its chart/strip graph."""
        return len(self.charts) - len(self.strips)


# --------------------------------------------------------------------------
# per-chart cell inventories


@dataclass(frozen=True)
class _Inventory:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    faces: tuple[tuple[str, str, tuple[str, ...]], ...]  # (name, region, vertex cycle)

    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def edge_index(self) -> dict[frozenset, int]:
        return {frozenset(e): i for i, e in enumerate(self.edges)}


def _inventory(kind: str) -> _Inventory:
    if kind == JOINING:
        internal = ("bl", "br")
        faces = (
            ("outer_top", "X", ("in1.TL", "in1.TR", "out.TR", "out.TL")),
            ("outer_bottom", "X", ("in2.BL", "in2.BR", "out.BR", "out.BL")),
            ("notch_upper", "X", ("in1.BL", "in1.BR", "br", "bl")),
            ("notch_lower", "X", ("in2.TL", "in2.TR", "br", "bl")),
            ("left", "Y", ("in1.TL", "out.TL", "out.BL", "in2.BL", "in2.TL", "bl", "in1.BL")),
            ("right", "Y", ("in1.TR", "out.TR", "out.BR", "in2.BR", "in2.TR", "br", "in1.BR")),
        )
    else:
        internal = ("st", "sb")
        faces = (
            ("top", "X", ("in.TL", "out1.TL", "out1.TR", "st", "out2.TL", "out2.TR", "in.TR")),
            ("bottom", "X", ("in.BL", "out1.BL", "out1.BR", "sb", "out2.BL", "out2.BR", "in.BR")),
            ("outer_left", "Y", ("in.TL", "out1.TL", "out1.BL", "in.BL")),
            ("outer_right", "Y", ("in.TR", "out2.TR", "out2.BR", "in.BR")),
            ("gap_left", "Y", ("out1.TR", "st", "sb", "out1.BR")),
            ("gap_right", "Y", ("out2.TL", "st", "sb", "out2.BL")),
        )
    verts = tuple(f"{p}.{c}" for p in PORTS[kind] for c in CORNERS) + internal
    edges: list[tuple[str, str]] = []
    seen: set[frozenset] = set()
    for p in PORTS[kind]:
        for a, b in PORT_EDGES.values():
            e = (f"{p}.{a}", f"{p}.{b}")
            edges.append(e)
            seen.add(frozenset(e))
    for _, _, cyc in faces:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if frozenset((a, b)) not in seen:
                seen.add(frozenset((a, b)))
                edges.append((a, b))
    return _Inventory(verts, tuple(edges), faces)


INVENTORY = {JOINING: _inventory(JOINING), SPLITTING: _inventory(SPLITTING)}


@dataclass(frozen=True)
class _Compiled:
    nv: int
    ne: int
    nf: int
    edge_ends: tuple[tuple[int, int], ...]
    face_region: tuple[str, ...]
    face_darts: tuple[tuple[tuple[int, int], ...], ...]  # (edge, +1/-1) around each face
    face_verts: tuple[tuple[int, ...], ...]
    port_corner: dict
    port_edge: dict


def _compile(kind: str) -> _Compiled:
    inv = INVENTORY[kind]
    vi = inv.vertex_index()
    ei = inv.edge_index()
    darts = []
    fverts = []
    for _, _, cyc in inv.faces:
        ds = []
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            e = ei[frozenset((a, b))]
            ds.append((e, 1 if inv.edges[e] == (a, b) else -1))
        darts.append(tuple(ds))
        fverts.append(tuple(vi[v] for v in cyc))
    pc = {(p, c): vi[f"{p}.{c}"] for p in PORTS[kind] for c in CORNERS}
    pe = {
        (p, name): ei[frozenset((f"{p}.{a}", f"{p}.{b}"))]
        for p in PORTS[kind]
        for name, (a, b) in PORT_EDGES.items()
    }
    return _Compiled(
        nv=len(inv.vertices),
        ne=len(inv.edges),
        nf=len(inv.faces),
        edge_ends=tuple((vi[a], vi[b]) for a, b in inv.edges),
        face_region=tuple(r for _, r, _ in inv.faces),
        face_darts=tuple(darts),
        face_verts=tuple(fverts),
        port_corner=pc,
        port_edge=pe,
    )


_COMPILED = {JOINING: _compile(JOINING), SPLITTING: _compile(SPLITTING)}


# --------------------------------------------------------------------------
# validation


def validate_template(T: Template) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    kinds: dict[str, str] = {}
    for cid, kind in T.charts:
        if cid in kinds:
            diags.append(Diagnostic("duplicate-chart", "chart id used twice", vertex=cid))
        if kind not in (JOINING, SPLITTING):
            diags.append(Diagnostic("chart-kind", f"unknown chart kind {kind!r}", vertex=cid))
            continue
        kinds[cid] = kind
    if not T.charts:
        diags.append(Diagnostic("empty", "template has no charts"))
    used_out: dict[tuple[str, str], int] = {}
    used_in: dict[tuple[str, str], int] = {}
    for i, s in enumerate(T.strips):
        sid = f"strip{i}"
        if s.twist not in (0, 1):
            diags.append(Diagnostic("twist", f"twist must be 0 or 1, got {s.twist!r}", edge=sid))
        for end, role, table, used in ((s.src, "source", OUT_PORTS, used_out), (s.dst, "target", IN_PORTS, used_in)):
            cid, port = end
            if cid not in kinds:
                diags.append(Diagnostic("unknown-chart", f"{role} chart {cid!r} does not exist", edge=sid))
                continue
            if port not in PORTS[kinds[cid]]:
                diags.append(Diagnostic("unknown-port", f"{kinds[cid]} chart has no port {port!r}", vertex=cid, edge=sid))
                continue
            if port not in table[kinds[cid]]:
                diags.append(
                    Diagnostic("port-kind", f"{role} port {port!r} has the wrong direction", vertex=cid, edge=sid)
                )
                continue
            used[end] = used.get(end, 0) + 1
    for used, table, what in ((used_out, OUT_PORTS, "out"), (used_in, IN_PORTS, "in")):
        for cid, kind in kinds.items():
            for port in table[kind]:
                n = used.get((cid, port), 0)
                if n == 0:
                    diags.append(Diagnostic("dangling-port", f"{what}-port {port!r} is not attached", vertex=cid))
                elif n > 1:
                    diags.append(Diagnostic("port-reused", f"{what}-port {port!r} used by {n} strips", vertex=cid))
    nj = sum(1 for k in kinds.values() if k == JOINING)
    ns = sum(1 for k in kinds.values() if k == SPLITTING)
    if nj != ns:
        diags.append(Diagnostic("chart-balance", f"{nj} joining charts but {ns} splitting charts"))
    if kinds and _chart_components(list(kinds), T.strips) > 1:
        diags.append(Diagnostic("disconnected", "chart/strip graph is disconnected"))
    return diags


def _chart_components(ids: list[str], strips: Iterable[Strip]) -> int:
    parent = {c: c for c in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    n = len(ids)
    for s in strips:
        a, b = s.src[0], s.dst[0]
        if a in parent and b in parent:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                n -= 1
    return n


def build_lorenz(twists: tuple[int, int, int] = (0, 0, 0)) -> Template:
    """Lorenz template: one joining and one splitting chart, both branches returning."""
    t0, t1, t2 = twists
    return Template(
        [("J", JOINING), ("S", SPLITTING)],
        [
            Strip(("J", "out"), ("S", "in"), t0),
            Strip(("S", "out1"), ("J", "in1"), t1),
            Strip(("S", "out2"), ("J", "in2"), t2),
        ],
    )


# --------------------------------------------------------------------------
# boundary reports


@dataclass(frozen=True)
class SurfaceComponent:
    kind: str
    euler_char: int
    boundary_circles: int
    capped_genus: int

    def __post_init__(self) -> None:
        capped = self.euler_char + self.boundary_circles
        if capped % 2 or capped > 2 or self.capped_genus != (2 - capped) // 2:
            raise ValueError(
                f"inconsistent component: chi={self.euler_char}, circles={self.boundary_circles}, "
                f"genus={self.capped_genus}"
            )

    @classmethod
    def closed(cls, kind: str, genus: int) -> "SurfaceComponent":
        """Component with no boundary circles and the given genus (for synthetic reports)."""
        return cls(kind, 2 - 2 * genus, 0, genus)


@dataclass(frozen=True)
class BoundaryReport:
    entrance: tuple[SurfaceComponent, ...]
    exit: tuple[SurfaceComponent, ...]
    dividing_curves: int
    s0: int
    s1: int
    t0: int
    t1: int
    total_boundary_euler: int
    closed_genera: tuple[int, ...] = field(default=())

    @classmethod
    def from_components(
        cls,
        entrance: Sequence[SurfaceComponent],
        exit: Sequence[SurfaceComponent],
        dividing_curves: int,
        closed_genera: Sequence[int] = (),
        total_boundary_euler: Optional[int] = None,
    ) -> "BoundaryReport":
        ent = tuple(sorted(entrance, key=_component_key))
        ext = tuple(sorted(exit, key=_component_key))
        if total_boundary_euler is None:
            total_boundary_euler = sum(c.euler_char for c in ent + ext)
        return cls(
            entrance=ent,
            exit=ext,
            dividing_curves=dividing_curves,
            s0=sum(1 for c in ent if c.capped_genus > 1),
            s1=sum(1 for c in ent if c.capped_genus == 0),
            t0=sum(1 for c in ext if c.capped_genus > 1),
            t1=sum(1 for c in ext if c.capped_genus == 0),
            total_boundary_euler=total_boundary_euler,
            closed_genera=tuple(sorted(closed_genera)),
        )

    @classmethod
    def from_genera(cls, entrance: Sequence[int], exit: Sequence[int]) -> "BoundaryReport":
        """Synthetic report from capped genera alone."""
        return cls.from_components(
            [SurfaceComponent.closed("entrance", g) for g in entrance],
            [SurfaceComponent.closed("exit", g) for g in exit],
            dividing_curves=0,
        )

    def entrance_genera(self) -> list[int]:
        return [c.capped_genus for c in self.entrance]

    def exit_genera(self) -> list[int]:
        return [c.capped_genus for c in self.exit]

    def to_dict(self) -> dict:
        comp = lambda c: {  # noqa: E731
            "euler_char": c.euler_char,
            "boundary_circles": c.boundary_circles,
            "capped_genus": c.capped_genus,
        }
        return {
            "entrance": [comp(c) for c in self.entrance],
            "exit": [comp(c) for c in self.exit],
            "dividing_curves": self.dividing_curves,
            "s0": self.s0,
            "s1": self.s1,
            "t0": self.t0,
            "t1": self.t1,
            "total_boundary_euler": self.total_boundary_euler,
            "closed_genera": list(self.closed_genera),
            "template_genus": template_genus(self),
        }


def _component_key(c: SurfaceComponent):
    return (-c.capped_genus, c.euler_char, c.boundary_circles)


def boundary_signature(report: BoundaryReport) -> tuple:
    """Hashable summary: per-component (kind, chi, circles), dividing curves, closed pieces."""
    comps = sorted(
        [("entrance", c.euler_char, c.boundary_circles) for c in report.entrance]
        + [("exit", c.euler_char, c.boundary_circles) for c in report.exit]
    )
    return (tuple(comps), report.dividing_curves, report.closed_genera, report.total_boundary_euler)


class _UF:
    __slots__ = ("p",)

    def __init__(self, n: int) -> None:
        self.p = list(range(n))

    def find(self, x: int) -> int:
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


def thicken_boundary(T: Template) -> BoundaryReport:
    """Trace the boundary of the thickened template.

    Raises ``ValueError`` for an invalid template and :class:`TemplateError`
    if the glued complex is not a closed orientable surface (an inventory or
    gluing bug; never expected for valid input).
    """
    diags = validate_template(T)
    if diags:
        raise ValueError("invalid template: " + "; ".join(str(d) for d in diags))

    # global numbering
    voff, eoff, foff = {}, {}, {}
    nv = ne = nf = 0
    comp = []
    for cid, kind in T.charts:
        c = _COMPILED[kind]
        voff[cid], eoff[cid], foff[cid] = nv, ne, nf
        nv += c.nv
        ne += c.ne
        nf += c.nf
        comp.append((cid, c))

    vuf, euf = _UF(nv), _UF(ne)
    # orientation of each local edge relative to its glued class; glued port
    # edges are oriented by the out-side edge carried across the corner map
    edge_sign = [1] * ne
    kinds = T.kinds
    for s in T.strips:
        (ca, pa), (cb, pb) = s.src, s.dst
        A, B = _COMPILED[kinds[ca]], _COMPILED[kinds[cb]]
        cmap = HALF_TURN if s.twist else {c: c for c in CORNERS}
        for corner in CORNERS:
            vuf.union(voff[ca] + A.port_corner[(pa, corner)], voff[cb] + B.port_corner[(pb, cmap[corner])])
        for name, (a, b) in PORT_EDGES.items():
            ta, tb = cmap[a], cmap[b]
            tname = _PORT_EDGE_BY_ENDS[frozenset((ta, tb))]
            eb = eoff[cb] + B.port_edge[(pb, tname)]
            euf.union(eoff[ca] + A.port_edge[(pa, name)], eb)
            edge_sign[eb] = 1 if PORT_EDGES[tname] == (ta, tb) else -1

    face_region: list[str] = []
    face_edges: list[list[tuple[int, int]]] = []  # (edge class, sign)
    face_verts: list[list[int]] = []
    edge_ends: dict[int, tuple[int, int]] = {}
    for cid, c in comp:
        vo, eo = voff[cid], eoff[cid]
        for k, (a, b) in enumerate(c.edge_ends):
            cls = euf.find(eo + k)
            if edge_sign[eo + k] > 0:
                edge_ends.setdefault(cls, (vuf.find(vo + a), vuf.find(vo + b)))
        for f in range(c.nf):
            face_region.append(c.face_region[f])
            face_edges.append([(euf.find(eo + e), sgn * edge_sign[eo + e]) for e, sgn in c.face_darts[f]])
            face_verts.append([vuf.find(vo + v) for v in c.face_verts[f]])

    # every edge class must bound exactly two faces
    incident: dict[int, list[tuple[int, int]]] = {}
    for f, ds in enumerate(face_edges):
        for cls, sgn in ds:
            incident.setdefault(cls, []).append((f, sgn))
    for cls, uses in incident.items():
        if len(uses) != 2:
            raise TemplateError(f"edge class {cls} bounds {len(uses)} faces")

    # orientability, closed components
    orient = [0] * nf
    closed = _UF(nf)
    for start in range(nf):
        if orient[start]:
            continue
        orient[start] = 1
        stack = [start]
        while stack:
            f = stack.pop()
            for cls, sgn in face_edges[f]:
                (f1, s1), (f2, s2) = incident[cls]
                g, sg, sf = (f2, s2, s1) if f1 == f else (f1, s1, s2)
                want = -orient[f] * sf * sg
                if orient[g] == 0:
                    orient[g] = want
                    closed.union(f, g)
                    stack.append(g)
                elif orient[g] != want:
                    raise TemplateError("boundary surface is not orientable")

    # regions: union faces of the same region across shared edges
    reg = _UF(nf)
    dividing: list[int] = []
    for cls, ((f1, _), (f2, _)) in incident.items():
        if face_region[f1] == face_region[f2]:
            reg.union(f1, f2)
        else:
            dividing.append(cls)

    closed_chi: dict[int, list[set]] = {}
    region_cells: dict[int, list[set]] = {}
    for f in range(nf):
        for table, root in ((closed_chi, closed.find(f)), (region_cells, reg.find(f))):
            cells = table.setdefault(root, [set(), set(), 0])
            cells[0].update(face_verts[f])
            cells[1].update(cls for cls, _ in face_edges[f])
            cells[2] += 1

    # dividing curves: each vertex on a dividing edge must have degree 2 there
    deg: dict[int, int] = {}
    cuf_nodes: dict[int, int] = {}
    for cls in dividing:
        for v in edge_ends[cls]:
            deg[v] = deg.get(v, 0) + 1
            cuf_nodes.setdefault(v, len(cuf_nodes))
    if any(d != 2 for d in deg.values()):
        raise TemplateError("dividing curves are not disjoint circles")
    cuf = _UF(len(cuf_nodes))
    for cls in dividing:
        a, b = edge_ends[cls]
        cuf.union(cuf_nodes[a], cuf_nodes[b])
    circles_of: dict[int, int] = {}
    circle_roots: set[int] = set()
    seen_circle_region: set[tuple[int, int]] = set()
    for cls in dividing:
        root = cuf.find(cuf_nodes[edge_ends[cls][0]])
        circle_roots.add(root)
        for f, _ in incident[cls]:
            r = reg.find(f)
            if (root, r) not in seen_circle_region:
                seen_circle_region.add((root, r))
                circles_of[r] = circles_of.get(r, 0) + 1

    entrance, exit_ = [], []
    for root, (vs, es, nfaces) in region_cells.items():
        chi = len(vs) - len(es) + nfaces
        circles = circles_of.get(root, 0)
        capped = chi + circles
        if capped % 2 or capped > 2:
            raise TemplateError(f"component with capped Euler characteristic {capped}")
        kind = "entrance" if face_region[root] == "X" else "exit"
        (entrance if kind == "entrance" else exit_).append(
            SurfaceComponent(kind, chi, circles, (2 - capped) // 2)
        )

    closed_genera = []
    total = 0
    for vs, es, nfaces in closed_chi.values():
        chi = len(vs) - len(es) + nfaces
        if chi % 2:
            raise TemplateError(f"closed boundary component with odd Euler characteristic {chi}")
        total += chi
        closed_genera.append((2 - chi) // 2)
    return BoundaryReport.from_components(
        entrance, exit_, len(circle_roots), closed_genera=closed_genera, total_boundary_euler=total
    )


def side_terms(report: BoundaryReport) -> tuple[int, int]:
    """(sum of entrance genera > 1 minus their count, same for exit)."""
    ent = sum(g for g in report.entrance_genera() if g > 1) - report.s0
    ext = sum(g for g in report.exit_genera() if g > 1) - report.t0
    return ent, ext


def template_genus(report: BoundaryReport) -> int:
    return max(side_terms(report))


def check_lemma41(report: BoundaryReport) -> bool:
    """Entrance/exit Euler identity, both sides evaluated literally."""
    lhs = sum(g for g in report.entrance_genera() if g > 1) - report.s0 - report.s1
    rhs = sum(g for g in report.exit_genera() if g > 1) - report.t0 - report.t1
    return lhs == rhs


# --------------------------------------------------------------------------
# enumeration
#
# A template with k joining and k splitting charts is encoded by a matching
# M (out-port index -> in-port index) and a twist bitmask t (bit o = twist
# of the strip leaving out-port o).  Out-ports: J_i.out (o = i), then
# S_i.out1, S_i.out2 (o = k + 2i, k + 2i + 1).  In-ports: S_i.in (q = i),
# then J_i.in1, J_i.in2 (q = k + 2i, k + 2i + 1).
#
# The symmetry group is generated by relabelling joining charts, relabelling
# splitting charts, and rotating a single chart by a half turn about its flow
# axis.  Rotation swaps the chart's paired ports and toggles the twist of
# every strip end at that chart; it is a self-homeomorphism of the thickened
# template preserving entrance and exit sets, so boundary reports are
# invariant under the whole group.


def _out_ports(k: int) -> list[tuple[str, str]]:
    return [(f"J{i}", "out") for i in range(k)] + [
        (f"S{i}", p) for i in range(k) for p in ("out1", "out2")
    ]


def _in_ports(k: int) -> list[tuple[str, str]]:
    return [(f"S{i}", "in") for i in range(k)] + [
        (f"J{i}", p) for i in range(k) for p in ("in1", "in2")
    ]


def _to_template(k: int, M: Sequence[int], t: int) -> Template:
    outs, ins = _out_ports(k), _in_ports(k)
    charts = [(f"J{i}", JOINING) for i in range(k)] + [(f"S{i}", SPLITTING) for i in range(k)]
    strips = [Strip(outs[o], ins[M[o]], (t >> o) & 1) for o in range(3 * k)]
    return Template(charts, strips)


def _from_template(T: Template) -> tuple[int, list[int], int, dict[str, str]]:
    """Encode a valid template; returns (k, M, t, chart id map old -> J_i/S_i)."""
    js = [c for c, kind in T.charts if kind == JOINING]
    ss = [c for c, kind in T.charts if kind == SPLITTING]
    k = len(js)
    rename = {c: f"J{i}" for i, c in enumerate(js)} | {c: f"S{i}" for i, c in enumerate(ss)}
    oidx = {p: i for i, p in enumerate(_out_ports(k))}
    qidx = {p: i for i, p in enumerate(_in_ports(k))}
    M = [0] * (3 * k)
    t = 0
    for s in T.strips:
        o = oidx[(rename[s.src[0]], s.src[1])]
        M[o] = qidx[(rename[s.dst[0]], s.dst[1])]
        t |= (s.twist & 1) << o
    return k, M, t, rename


def _connected(k: int, M: Sequence[int]) -> bool:
    # chart index: J_i -> i, S_i -> k + i
    def out_chart(o):
        return o if o < k else k + (o - k) // 2

    def in_chart(q):
        return k + q if q < k else (q - k) // 2

    parent = list(range(2 * k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    n = 2 * k
    for o, q in enumerate(M):
        a, b = find(out_chart(o)), find(in_chart(q))
        if a != b:
            parent[a] = b
            n -= 1
    return n == 1


@lru_cache(maxsize=None)
def _relabelings(k: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """(phi, psi) pairs: out-port map and in-port map for every chart relabelling."""
    out = []
    for sig in itertools.permutations(range(k)):
        for tau in itertools.permutations(range(k)):
            phi = [sig[i] for i in range(k)] + [
                k + 2 * tau[i] + r for i in range(k) for r in (0, 1)
            ]
            psi = [tau[i] for i in range(k)] + [
                k + 2 * sig[i] + r for i in range(k) for r in (0, 1)
            ]
            out.append((tuple(phi), tuple(psi)))
    return tuple(out)


def rotate_chart(k: int, M: Sequence[int], t: int, chart: int) -> tuple[list[int], int]:
    """Half-turn rotation of one chart (index i < k: J_i, else S_{i-k})."""
    M = list(M)
    if chart < k:
        i = chart
        a, b = k + 2 * i, k + 2 * i + 1
        swap = {a: b, b: a}
        M = [swap.get(q, q) for q in M]
        toggle = [(o == i) + (M[o] in (a, b)) for o in range(3 * k)]
        t2 = t
    else:
        i = chart - k
        a, b = k + 2 * i, k + 2 * i + 1
        M[a], M[b] = M[b], M[a]
        ta, tb = (t >> a) & 1, (t >> b) & 1
        t2 = (t & ~((1 << a) | (1 << b))) | (tb << a) | (ta << b)
        toggle = [(o in (a, b)) + (M[o] == i) for o in range(3 * k)]
    for o, n in enumerate(toggle):
        if n % 2:
            t2 ^= 1 << o
    return M, t2


def _code(M: Sequence[int], base: int) -> int:
    c = 0
    for q in M:
        c = c * base + q
    return c


def _apply_relabel(M: Sequence[int], t: int, phi, psi) -> tuple[list[int], int]:
    M2 = [0] * len(M)
    t2 = 0
    for o, q in enumerate(M):
        M2[phi[o]] = psi[q]
        t2 |= ((t >> o) & 1) << phi[o]
    return M2, t2


def canonical_form(T: Template) -> tuple[int, tuple[int, ...], int]:
    """Orbit-minimal (k, matching, twists) under relabelling and chart rotation.

    Brute force over the whole group; intended for small templates and tests.
    """
    diags = validate_template(T)
    if diags:
        raise ValueError("invalid template: " + "; ".join(str(d) for d in diags))
    k, M, t, _ = _from_template(T)
    best = None
    for mask in range(1 << (2 * k)):
        Mr, tr = list(M), t
        for c in range(2 * k):
            if mask >> c & 1:
                Mr, tr = rotate_chart(k, Mr, tr, c)
        for phi, psi in _relabelings(k):
            M2, t2 = _apply_relabel(Mr, tr, phi, psi)
            key = (_code(M2, 3 * k), t2)
            if best is None or key < best:
                best = key
    code, t_best = best
    digits = []
    for _ in range(3 * k):
        code, d = divmod(code, 3 * k)
        digits.append(d)
    return k, tuple(reversed(digits)), t_best


@lru_cache(maxsize=None)
def _relabel_tables(k: int):
    """Every labelled matching of size 3k with its code and canonical relabelling code.

    Returns (codes sorted, canonical code per entry, matchings array).
    """
    n = 3 * k
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    weights = (n ** np.arange(n - 1, -1, -1)).astype(np.int64)
    codes = perms @ weights
    canon = codes.copy()
    for phi, psi in _relabelings(k):
        psi_a = np.asarray(psi)
        inv_phi = np.argsort(np.asarray(phi))
        img = psi_a[perms[:, inv_phi]]
        np.minimum(canon, img @ weights, out=canon)
    order = np.argsort(codes)
    return codes[order], canon[order], perms[order]


def _relabel_canonical(k: int, M: Sequence[int]) -> int:
    n = 3 * k
    if k <= 3:
        codes, canon, _ = _relabel_tables(k)
        return int(canon[np.searchsorted(codes, _code(M, n))])
    best = None
    for phi, psi in _relabelings(k):
        M2, _ = _apply_relabel(M, 0, phi, psi)
        c = _code(M2, n)
        if best is None or c < best:
            best = c
    return best


def _relabel_reps(k: int) -> Iterator[list[int]]:
    n = 3 * k
    if k <= 3:
        codes, canon, perms = _relabel_tables(k)
        for idx in np.nonzero(codes == canon)[0]:
            yield perms[idx].tolist()
        return
    for p in itertools.permutations(range(n)):
        if _relabel_canonical(k, p) == _code(p, n):
            yield list(p)


def _orbit_reps(k: int) -> Iterator[tuple[list[int], list[int]]]:
    """(matching, twist masks) for one representative of each orbit of connected templates."""
    n = 3 * k
    all_t = np.arange(1 << n, dtype=np.int64)
    bits = (all_t[:, None] >> np.arange(n)) & 1
    for M in _relabel_reps(k):
        if not _connected(k, M):
            continue
        code = _code(M, n)
        stabilizer = []  # (perm, xor mask) acting on twist bits
        minimal = True
        for mask in range(1 << (2 * k)):
            Mr, xor = list(M), 0
            # track strips: rotate with t = unit bits to read off the action
            for c in range(2 * k):
                if mask >> c & 1:
                    Mr, xor = rotate_chart(k, Mr, xor, c)
            rc = _relabel_canonical(k, Mr)
            if rc < code:
                minimal = False
                break
            if rc != code:
                continue
            # strip permutation induced by the rotations
            perm_r = list(range(n))
            for c in range(2 * k):
                if mask >> c & 1 and c >= k:
                    a, b = k + 2 * (c - k), k + 2 * (c - k) + 1
                    perm_r[a], perm_r[b] = perm_r[b], perm_r[a]
            for phi, psi in _relabelings(k):
                M2, _ = _apply_relabel(Mr, 0, phi, psi)
                if M2 == M:
                    perm = [phi[perm_r[o]] for o in range(n)]
                    xor2 = 0
                    for o in range(n):
                        xor2 |= ((xor >> o) & 1) << phi[o]
                    stabilizer.append((perm, xor2))
        if not minimal:
            continue
        keep = np.ones(len(all_t), dtype=bool)
        for perm, xor2 in stabilizer:
            img = (bits << np.asarray(perm)).sum(axis=1) ^ xor2
            keep &= all_t <= img
        yield M, np.nonzero(keep)[0].tolist()


def enumerate_small_templates(max_charts: int) -> Iterator[Template]:
    """Every connected closed template with at most ``max_charts`` charts, one per symmetry class.

    Symmetry = relabelling charts of each kind and rotating individual charts
    by a half turn (see the module notes).  The stream is deterministic:
    sizes ascend, then matchings by code, then twist masks.  Sizes up to 6
    charts are precomputed quickly; 8 charts is supported but very slow.
    """
    if max_charts > 8:
        raise ValueError("max_charts must be <= 8")
    for k in range(1, max_charts // 2 + 1):
        for M, ts in _orbit_reps(k):
            for t in ts:
                yield _to_template(k, M, t)


def enumerate_labeled_templates(max_charts: int) -> Iterator[Template]:
    """Every connected template on the fixed chart ids J_i, S_i, no symmetry reduction."""
    if max_charts > 6:
        raise ValueError("labelled enumeration is limited to 6 charts")
    for k in range(1, max_charts // 2 + 1):
        for p in itertools.permutations(range(3 * k)):
            if not _connected(k, p):
                continue
            for t in range(1 << (3 * k)):
                yield _to_template(k, p, t)


def find_templates_with_signature(
    entrance: Sequence[int],
    exit: Sequence[int],
    dividing_curves: Optional[int] = None,
    max_charts: int = 4,
) -> Iterator[tuple[Template, BoundaryReport]]:
    """Search enumerated templates whose capped entrance/exit genera match."""
    want_in, want_out = sorted(entrance), sorted(exit)
    for T in enumerate_small_templates(max_charts):
        rep = thicken_boundary(T)
        if sorted(rep.entrance_genera()) != want_in or sorted(rep.exit_genera()) != want_out:
            continue
        if dividing_curves is not None and rep.dividing_curves != dividing_curves:
            continue
        yield T, rep
