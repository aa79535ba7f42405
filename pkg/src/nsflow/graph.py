"""Abstract Lyapunov graphs and the graph-side decision procedures.

A Lyapunov graph is a finite connected directed multigraph without oriented
cycles.  Edge weights are the genera of regular level sets (0 for a sphere,
1 for a torus, ...).  Vertices carry the chain-recurrent piece they collapse:
an attracting or repelling closed orbit, a saddle basic set labelled by an
irreducible matrix, or a singularity of index 0..3.

All analyzers are pure functions of immutable :class:`LyapunovGraph` values.
Violations are reported as lists of :class:`Diagnostic` records rather than
raised, so callers can render every problem at once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .gf2 import IntMatrix, is_irreducible, ssft_k

__all__ = [
    "AttractorOrbit",
    "RepellerOrbit",
    "Saddle",
    "Singularity",
    "VertexLabel",
    "Edge",
    "LyapunovGraph",
    "VertexStats",
    "Diagnostic",
    "ConditionResult",
    "S3Report",
    "SummandBound",
    "TemplateVertexCheck",
    "validate_abstract",
    "is_connected",
    "has_oriented_cycle",
    "cycle_rank",
    "vertex_stats",
    "vertex_residual",
    "required_residual",
    "nsf_balance_check",
    "check_s3",
    "reachable_by_nonzero",
    "vanishing_zero_edges",
    "deletable_edges",
    "summand_lower_bound",
    "check_template_vertex",
]


# --------------------------------------------------------------------------
# labels


@dataclass(frozen=True)
class AttractorOrbit:
    kind = "attractor"


@dataclass(frozen=True)
class RepellerOrbit:
    kind = "repeller"


@dataclass(frozen=True)
class Saddle:
    matrix: IntMatrix
    kind = "saddle"

    def __init__(self, matrix) -> None:
        object.__setattr__(self, "matrix", IntMatrix.of(matrix))

    @property
    def k(self) -> int:
        return ssft_k(self.matrix)


@dataclass(frozen=True)
class Singularity:
    index: int
    kind = "singularity"

    def __post_init__(self) -> None:
        if self.index not in (0, 1, 2, 3):
            raise ValueError(f"singularity index must be in 0..3, got {self.index}")


VertexLabel = Union[AttractorOrbit, RepellerOrbit, Saddle, Singularity]


# --------------------------------------------------------------------------
# graph


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    weight: int


class LyapunovGraph:
    """Immutable labelled directed multigraph.

    The constructor only enforces referential integrity (unique ids, edge
    endpoints that exist, integer weights).  Everything the abstract model
    demands beyond that (connectedness, no oriented cycles, nonnegative
    weights, irreducible saddle matrices) is reported by
    :func:`validate_abstract`, so malformed inputs can still be analysed.
    """

    __slots__ = ("_labels", "_edges", "_edge_index", "_out", "_in")

    def __init__(
        self,
        vertices: Union[Mapping[str, VertexLabel], Iterable[tuple[str, VertexLabel]]],
        edges: Iterable[Union[Edge, tuple[str, str, str, int]]] = (),
    ) -> None:
        items = list(vertices.items()) if isinstance(vertices, Mapping) else list(vertices)
        labels: dict[str, VertexLabel] = {}
        for vid, label in items:
            if vid in labels:
                raise ValueError(f"duplicate vertex id {vid!r}")
            if not isinstance(label, (AttractorOrbit, RepellerOrbit, Saddle, Singularity)):
                raise TypeError(f"vertex {vid!r}: unsupported label {label!r}")
            labels[vid] = label
        edge_list: list[Edge] = []
        index: dict[str, Edge] = {}
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            if e.id in index:
                raise ValueError(f"duplicate edge id {e.id!r}")
            for end in (e.src, e.dst):
                if end not in labels:
                    raise ValueError(f"edge {e.id!r} references unknown vertex {end!r}")
            if isinstance(e.weight, bool) or not isinstance(e.weight, int):
                raise ValueError(f"edge {e.id!r} has non-integer weight {e.weight!r}")
            index[e.id] = e
            edge_list.append(e)
        out: dict[str, list[Edge]] = {v: [] for v in labels}
        inc: dict[str, list[Edge]] = {v: [] for v in labels}
        for e in edge_list:
            out[e.src].append(e)
            inc[e.dst].append(e)
        self._labels = labels
        self._edges = tuple(edge_list)
        self._edge_index = index
        self._out = {v: tuple(es) for v, es in out.items()}
        self._in = {v: tuple(es) for v, es in inc.items()}

    # read-only views
    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self._labels)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def label(self, v: str) -> VertexLabel:
        try:
            return self._labels[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def labels(self) -> dict[str, VertexLabel]:
        return dict(self._labels)

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_index[eid]
        except KeyError:
            raise KeyError(f"unknown edge {eid!r}") from None

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        self.label(v)
        return self._out[v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        self.label(v)
        return self._in[v]

    def degree(self, v: str) -> int:
        return len(self.in_edges(v)) + len(self.out_edges(v))

    def __contains__(self, v: object) -> bool:
        return v in self._labels

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LyapunovGraph):
            return NotImplemented
        return self._labels == other._labels and set(self._edges) == set(other._edges)

    def __hash__(self) -> int:
        return hash((frozenset(self._labels.items()), frozenset(self._edges)))

    def __repr__(self) -> str:
        return f"LyapunovGraph({len(self._labels)} vertices, {len(self._edges)} edges)"

    # derived graphs
    def with_edges(self, edges: Iterable[Edge]) -> "LyapunovGraph":
        return LyapunovGraph(self._labels, edges)

    def without_edges(self, eids: Iterable[str]) -> "LyapunovGraph":
        drop = set(eids)
        return LyapunovGraph(self._labels, [e for e in self._edges if e.id not in drop])

    def with_weight(self, eid: str, weight: int) -> "LyapunovGraph":
        self.edge(eid)
        return LyapunovGraph(
            self._labels,
            [Edge(e.id, e.src, e.dst, weight) if e.id == eid else e for e in self._edges],
        )

    def with_label(self, v: str, label: VertexLabel) -> "LyapunovGraph":
        self.label(v)
        labels = dict(self._labels)
        labels[v] = label
        return LyapunovGraph(labels, self._edges)

    def reversed(self) -> "LyapunovGraph":
        """Flip every edge; attractors and repellers swap, index r becomes 3 - r."""
        swap: dict[str, VertexLabel] = {}
        for v, lab in self._labels.items():
            if isinstance(lab, AttractorOrbit):
                lab = RepellerOrbit()
            elif isinstance(lab, RepellerOrbit):
                lab = AttractorOrbit()
            elif isinstance(lab, Singularity):
                lab = Singularity(3 - lab.index)
            swap[v] = lab
        return LyapunovGraph(swap, [Edge(e.id, e.dst, e.src, e.weight) for e in self._edges])


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    vertex: Optional[str] = None
    edge: Optional[str] = None

    def __str__(self) -> str:
        where = []
        if self.vertex is not None:
            where.append(f"vertex {self.vertex}")
        if self.edge is not None:
            where.append(f"edge {self.edge}")
        loc = f" [{', '.join(where)}]" if where else ""
        return f"{self.code}{loc}: {self.message}"

    def to_dict(self) -> dict:
        d = {"code": self.code, "message": self.message}
        if self.vertex is not None:
            d["vertex"] = self.vertex
        if self.edge is not None:
            d["edge"] = self.edge
        return d


@dataclass(frozen=True)
class VertexStats:
    e_plus: int
    e_minus: int
    G_plus: int
    G_minus: int

    @property
    def residual(self) -> int:
        return self.e_plus - self.e_minus - self.G_plus + self.G_minus


@dataclass(frozen=True)
class ConditionResult:
    passed: bool
    details: tuple[Diagnostic, ...] = ()


@dataclass(frozen=True)
class S3Report:
    """Outcome of the S^3 realizability test.

    ``preconditions`` lists violations of the sink/source labelling hypothesis
    (and of abstract well-formedness); when it is non-empty the graph is
    outside the theorem's scope and ``passed`` is False.
    """

    preconditions: tuple[Diagnostic, ...]
    condition1: ConditionResult
    condition2: ConditionResult
    condition3: ConditionResult

    @property
    def passed(self) -> bool:
        return (
            not self.preconditions
            and self.condition1.passed
            and self.condition2.passed
            and self.condition3.passed
        )

    def failures(self) -> list[Diagnostic]:
        out = list(self.preconditions)
        for c in (self.condition1, self.condition2, self.condition3):
            out.extend(c.details)
        return out


@dataclass(frozen=True)
class SummandBound:
    n: int
    certificate: tuple[str, ...]
    ok: bool
    cycle_rank: int
    source_edge: Optional[str] = None
    diagnostics: tuple[Diagnostic, ...] = ()

    @property
    def cycle_rank_ok(self) -> bool:
        return self.cycle_rank >= self.n


@dataclass(frozen=True)
class TemplateVertexCheck:
    s_ok: bool
    genus_ok: bool
    summand_ok: bool
    g_T: int
    s: int
    weight_sum: int
    side: str = "entrance"
    certificate: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.s_ok and self.genus_ok and self.summand_ok


# --------------------------------------------------------------------------
# structure


def _components(vertices: Sequence[str], edges: Iterable[Edge]) -> int:
    parent = {v: v for v in vertices}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = len(parent)
    for e in edges:
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[a] = b
            count -= 1
    return count


def is_connected(L: LyapunovGraph) -> bool:
    return len(L.vertices) > 0 and _components(L.vertices, L.edges) == 1


def _topological_order(L: LyapunovGraph) -> Optional[list[str]]:
    indeg = {v: len(L.in_edges(v)) for v in L.vertices}
    queue = deque(v for v in L.vertices if indeg[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for e in L.out_edges(v):
            indeg[e.dst] -= 1
            if indeg[e.dst] == 0:
                queue.append(e.dst)
    return order if len(order) == len(L.vertices) else None


def has_oriented_cycle(L: LyapunovGraph) -> bool:
    return _topological_order(L) is None


def _cycle_vertices(L: LyapunovGraph) -> list[str]:
    """Vertices lying on an oriented cycle of length >= 2 (self-loops are reported separately)."""
    if _topological_order(L) is not None:
        return []
    out = []
    for v in L.vertices:
        seen = set()
        stack = [e.dst for e in L.out_edges(v) if e.dst != v]
        while stack:
            x = stack.pop()
            if x == v:
                out.append(v)
                break
            if x in seen:
                continue
            seen.add(x)
            stack.extend(e.dst for e in L.out_edges(x) if e.dst != x)
    return out


def validate_abstract(L: LyapunovGraph) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    if not L.vertices:
        return [Diagnostic("empty", "graph has no vertices")]
    for e in L.edges:
        if e.weight < 0:
            diags.append(Diagnostic("negative-weight", f"weight {e.weight} < 0", edge=e.id))
        if e.src == e.dst:
            diags.append(Diagnostic("self-loop", "self-loop is an oriented cycle", vertex=e.src, edge=e.id))
    if not is_connected(L):
        diags.append(
            Diagnostic("disconnected", f"graph has {_components(L.vertices, L.edges)} connected components")
        )
    for v in _cycle_vertices(L):
        diags.append(Diagnostic("cycle", "vertex lies on an oriented cycle", vertex=v))
    for v in L.vertices:
        lab = L.label(v)
        if isinstance(lab, Saddle) and not is_irreducible(lab.matrix):
            diags.append(Diagnostic("reducible-matrix", "saddle matrix is not irreducible", vertex=v))
    return diags


def cycle_rank(L: LyapunovGraph) -> int:
    """First Betti number ``|E| - |V| + 1`` of a connected graph."""
    if not is_connected(L):
        raise ValueError("cycle rank is defined here for connected graphs only")
    return len(L.edges) - len(L.vertices) + 1


# --------------------------------------------------------------------------
# balance


def vertex_stats(L: LyapunovGraph, v: str) -> VertexStats:
    ins, outs = L.in_edges(v), L.out_edges(v)
    return VertexStats(
        e_plus=len(ins),
        e_minus=len(outs),
        G_plus=sum(e.weight for e in ins),
        G_minus=sum(e.weight for e in outs),
    )


def vertex_residual(L: LyapunovGraph, v: str) -> int:
    """``e+ - e- - G+ + G-`` at ``v``."""
    return vertex_stats(L, v).residual


def required_residual(label: VertexLabel) -> int:
    if isinstance(label, Singularity):
        return (-1) ** label.index
    return 0


def nsf_balance_check(L: LyapunovGraph) -> list[Diagnostic]:
    diags = []
    for v in L.vertices:
        actual = vertex_residual(L, v)
        need = required_residual(L.label(v))
        if actual != need:
            diags.append(
                Diagnostic("unbalanced", f"residual {actual}, required {need}", vertex=v)
            )
    return diags


# --------------------------------------------------------------------------
# S^3 realizability


def _is_tree(L: LyapunovGraph) -> bool:
    return is_connected(L) and len(L.edges) == len(L.vertices) - 1


def check_s3(L: LyapunovGraph) -> S3Report:
    pre = list(validate_abstract(L))
    for v in L.vertices:
        lab = L.label(v)
        st = vertex_stats(L, v)
        if st.e_minus == 0 and not (
            isinstance(lab, AttractorOrbit) or (isinstance(lab, Singularity) and lab.index == 0)
        ):
            pre.append(Diagnostic("sink-label", f"sink labelled {lab.kind}", vertex=v))
        if st.e_plus == 0 and not (
            isinstance(lab, RepellerOrbit) or (isinstance(lab, Singularity) and lab.index == 3)
        ):
            pre.append(Diagnostic("source-label", f"source labelled {lab.kind}", vertex=v))

    c1 = []
    if not _is_tree(L):
        c1.append(Diagnostic("not-tree", "underlying graph is not a tree"))
    for v in L.vertices:
        st = vertex_stats(L, v)
        if (st.e_minus == 0 or st.e_plus == 0) and L.degree(v) != 1:
            c1.append(Diagnostic("terminal-degree", f"sink/source has degree {L.degree(v)}", vertex=v))

    c2 = []
    for v in L.vertices:
        lab = L.label(v)
        if not isinstance(lab, Saddle):
            continue
        st = vertex_stats(L, v)
        k = lab.k
        if st.e_plus <= 0:
            c2.append(Diagnostic("no-incoming", "saddle without incoming edges", vertex=v))
        if st.e_minus <= 0:
            c2.append(Diagnostic("no-outgoing", "saddle without outgoing edges", vertex=v))
        if not (k + 1 - st.G_minus <= st.e_plus <= k + 1):
            c2.append(
                Diagnostic(
                    "incoming-bound",
                    f"need {k + 1 - st.G_minus} <= e+ = {st.e_plus} <= {k + 1} (k={k})",
                    vertex=v,
                )
            )
        if not (k + 1 - st.G_plus <= st.e_minus <= k + 1):
            c2.append(
                Diagnostic(
                    "outgoing-bound",
                    f"need {k + 1 - st.G_plus} <= e- = {st.e_minus} <= {k + 1} (k={k})",
                    vertex=v,
                )
            )

    c3 = nsf_balance_check(L)
    return S3Report(
        preconditions=tuple(pre),
        condition1=ConditionResult(not c1, tuple(c1)),
        condition2=ConditionResult(not c2, tuple(c2)),
        condition3=ConditionResult(not c3, tuple(c3)),
    )


# --------------------------------------------------------------------------
# summand analysis


def reachable_by_nonzero(L: LyapunovGraph, start: str, direction: str = "forward") -> set[str]:
    """Vertices joined to ``start`` by an oriented path of edges of weight >= 1.

    ``direction="backward"`` follows edges against their orientation.  The
    start vertex is always included (empty path).
    """
    L.label(start)
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be 'forward' or 'backward', not {direction!r}")
    forward = direction == "forward"
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for e in L.out_edges(x) if forward else L.in_edges(x):
            if e.weight < 1:
                continue
            y = e.dst if forward else e.src
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def vanishing_zero_edges(L: LyapunovGraph, eid: str) -> list[str]:
    """Weight-0 edges that terminate in the forward nonzero region of ``t(E)``."""
    E = L.edge(eid)
    region = reachable_by_nonzero(L, E.dst, "forward")
    return sorted(e.id for e in L.edges if e.weight == 0 and e.dst in region)


def deletable_edges(L: LyapunovGraph, candidates: Iterable[str]) -> list[str]:
    """Greedy maximal subset of ``candidates`` whose joint removal keeps ``L`` connected.

    Candidates are scanned in sorted id order; since the edge sets whose
    complement stays connected form the independent sets of a matroid, the
    greedy result has maximum size and is the lexicographically smallest such
    set.
    """
    removed: set[str] = set()
    for eid in sorted(set(candidates)):
        trial = removed | {eid}
        if is_connected(L.without_edges(trial)):
            removed = trial
    return sorted(removed)


def summand_lower_bound(L: LyapunovGraph) -> SummandBound:
    """Number of S^1 x S^2 summands forced by the heaviest edge, with a cut certificate.

    ``n = max(weight) - 1`` (floored at 0).  The certificate is ``n`` weight-0
    edges drawn from the vanishing set of a maximum-weight edge whose removal
    keeps ``L`` connected.  ``ok`` is False when no maximum-weight edge admits
    such a certificate, which means ``L`` is not the graph of a nonsingular
    Smale flow.
    """
    r = cycle_rank(L)
    if not L.edges:
        return SummandBound(0, (), True, r)
    wmax = max(e.weight for e in L.edges)
    n = max(wmax - 1, 0)
    if n == 0:
        return SummandBound(0, (), True, r)
    diags = []
    for E in sorted((e for e in L.edges if e.weight == wmax), key=lambda e: e.id):
        F = vanishing_zero_edges(L, E.id)
        keep = deletable_edges(L, F)
        if len(keep) >= n:
            return SummandBound(n, tuple(keep[:n]), True, r, source_edge=E.id)
        diags.append(
            Diagnostic(
                "no-certificate",
                f"{len(F)} vanishing weight-0 edges, only {len(keep)} removable without disconnecting; need {n}",
                edge=E.id,
            )
        )
    return SummandBound(n, (), False, r, diagnostics=tuple(diags))


def check_template_vertex(L: LyapunovGraph, v: str, report) -> TemplateVertexCheck:
    """Compatibility of a saddle vertex with the boundary data of a template.

    ``report`` is a :class:`nsflow.template.BoundaryReport`.  When the exit
    side realises the template genus the mirrored test (outgoing edges,
    exit genus buckets, forward reachability) is applied instead.
    """
    from .template import side_terms, template_genus

    if not isinstance(L.label(v), Saddle):
        raise ValueError(f"vertex {v!r} is not a saddle vertex")
    g_T = template_genus(report)
    ent, ext = side_terms(report)
    if ent >= ext:
        side, heavy, bucket = "entrance", [e for e in L.in_edges(v) if e.weight > 1], report.s0
    else:
        side, heavy, bucket = "exit", [e for e in L.out_edges(v) if e.weight > 1], report.t0
    s = len(heavy)
    wsum = sum(e.weight for e in heavy)

    if side == "entrance":
        region: set[str] = set()
        for e in heavy:
            region |= reachable_by_nonzero(L, e.src, "backward")
        F = [e.id for e in L.edges if e.weight == 0 and e.src in region]
    else:
        region = set()
        for e in heavy:
            region |= reachable_by_nonzero(L, e.dst, "forward")
        F = [e.id for e in L.edges if e.weight == 0 and e.dst in region]
    cert = tuple(deletable_edges(L, F)[:g_T]) if g_T else ()
    return TemplateVertexCheck(
        s_ok=s <= bucket,
        genus_ok=wsum - s >= g_T,
        summand_ok=len(cert) >= g_T,
        g_T=g_T,
        s=s,
        weight_sum=wsum,
        side=side,
        certificate=cert,
    )


def iter_residuals(L: LyapunovGraph) -> Iterator[tuple[str, int, int]]:
    """(vertex, actual residual, required residual) for every vertex."""
    for v in L.vertices:
        yield v, vertex_residual(L, v), required_residual(L.label(v))
