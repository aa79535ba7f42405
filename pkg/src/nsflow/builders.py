"""Constructive Lyapunov graph families and graph-level surgery.

* :func:`build_lemma34` -- a tree realizable on S^3 carrying an edge of
  weight n+1, with n index-0 and n index-3 singular vertices.
* :func:`build_prop35` -- the same tree with singular ends spliced in pairs,
  giving a nonsingular graph of cycle rank n (a flow on n S^1 x S^2).
* :func:`surgery_connect` -- connected sum of two graphs through the saddle /
  attractor gadget.
* :func:`build_section5` -- the gadget ``G`` and the closed graph ``L`` of the
  2T^2 example on S^1 x S^2.
* :func:`random_nsf_graph` -- random balanced orbit/saddle graphs for tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .gf2 import IntMatrix, find_matrix_with_k
from .graph import (
    AttractorOrbit,
    Edge,
    LyapunovGraph,
    RepellerOrbit,
    Saddle,
    Singularity,
)

__all__ = [
    "build_lemma34",
    "build_prop35",
    "surgery_connect",
    "ExampleGraphs",
    "build_section5",
    "random_nsf_graph",
    "SurgeryError",
]

GADGET_MATRIX = IntMatrix(((1,),))


class SurgeryError(ValueError):
    pass


def build_lemma34(n: int) -> LyapunovGraph:
    """Tree on S^3 with a central edge ``E`` of weight ``n + 1``.

    Source side: ``R -(1)-> u1 -(2)-> ... -(n)-> un -(n+1)-> wn``, each ``uj``
    also emitting a weight-0 edge ``fj`` into an index-0 sink ``aj``.  Sink
    side mirrors it: ``wn -(n)-> ... -(1)-> A`` with each ``wj`` receiving a
    weight-0 edge ``hj`` from an index-3 source ``rj``.  Saddles at chain
    position ``j`` carry ``find_matrix_with_k(j)``.

    Vertex ids: ``R``, ``A``, ``u1..un``, ``w1..wn``, ``a1..an``, ``r1..rn``.
    Edge ids: ``E`` (central), ``eu1..eun`` (into ``uj``), ``ew1..ewn`` (out of
    ``wj``), ``f1..fn`` and ``h1..hn`` (weight 0).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    verts: dict = {"R": RepellerOrbit()}
    edges = []
    for j in range(1, n + 1):
        verts[f"u{j}"] = Saddle(find_matrix_with_k(j))
    for j in range(n, 0, -1):
        verts[f"w{j}"] = Saddle(find_matrix_with_k(j))
    verts["A"] = AttractorOrbit()
    for j in range(1, n + 1):
        verts[f"a{j}"] = Singularity(0)
        verts[f"r{j}"] = Singularity(3)

    edges.append(Edge("eu1", "R", "u1", 1))
    for j in range(2, n + 1):
        edges.append(Edge(f"eu{j}", f"u{j - 1}", f"u{j}", j))
    edges.append(Edge("E", f"u{n}", f"w{n}", n + 1))
    for j in range(n, 1, -1):
        edges.append(Edge(f"ew{j}", f"w{j}", f"w{j - 1}", j))
    edges.append(Edge("ew1", "w1", "A", 1))
    for j in range(1, n + 1):
        edges.append(Edge(f"f{j}", f"u{j}", f"a{j}", 0))
        edges.append(Edge(f"h{j}", f"r{j}", f"w{j}", 0))
    return LyapunovGraph(verts, edges)


def build_prop35(n: int) -> LyapunovGraph:
    """Splice the singular ends of :func:`build_lemma34` into ``n`` weight-0 edges.

    The outgoing sphere level of ``uj`` is pasted to the incoming sphere level
    of ``wj``, so edge ``sj`` runs ``uj -> wj`` (the only orientation that
    keeps both endpoints balanced and the graph acyclic).
    """
    base = build_lemma34(n)
    singular = {v for v in base.vertices if isinstance(base.label(v), Singularity)}
    verts = {v: lab for v, lab in base.labels().items() if v not in singular}
    edges = [e for e in base.edges if e.src not in singular and e.dst not in singular]
    for j in range(1, n + 1):
        edges.append(Edge(f"s{j}", f"u{j}", f"w{j}", 0))
    return LyapunovGraph(verts, edges)


def _check_attractor_edge(L: LyapunovGraph, eid: str, side: str) -> Edge:
    try:
        e = L.edge(eid)
    except KeyError:
        raise SurgeryError(f"{side}: unknown edge {eid!r}") from None
    if e.weight != 1:
        raise SurgeryError(f"{side}: edge {eid!r} has weight {e.weight}, expected 1")
    if not isinstance(L.label(e.dst), AttractorOrbit):
        raise SurgeryError(f"{side}: edge {eid!r} does not end at an attracting orbit")
    if L.degree(e.dst) != 1:
        raise SurgeryError(f"{side}: attractor {e.dst!r} has degree {L.degree(e.dst)}, expected 1")
    return e


def surgery_connect(L1: LyapunovGraph, e1: str, L2: LyapunovGraph, e2: str) -> LyapunovGraph:
    """Connected sum along two edges ending at closed-orbit attractors.

    The two attractor ends are removed, the edges are redirected into a new
    saddle orbit (matrix [[1]]), and the saddle drains through a weight-1
    edge into a new attractor.  Ids are prefixed ``a/``, ``b/`` (inputs) and
    ``g/`` (gadget) so the result never has collisions.
    """
    E1 = _check_attractor_edge(L1, e1, "left")
    E2 = _check_attractor_edge(L2, e2, "right")

    verts: dict = {}
    edges: list[Edge] = []
    for prefix, L, E in (("a/", L1, E1), ("b/", L2, E2)):
        for v, lab in L.labels().items():
            if v != E.dst:
                verts[prefix + v] = lab
        for e in L.edges:
            dst = "g/saddle" if e.id == E.id else prefix + e.dst
            edges.append(Edge(prefix + e.id, prefix + e.src, dst, e.weight))
    verts["g/saddle"] = Saddle(GADGET_MATRIX)
    verts["g/attractor"] = AttractorOrbit()
    edges.append(Edge("g/out", "g/saddle", "g/attractor", 1))
    return LyapunovGraph(verts, edges)


@dataclass(frozen=True)
class ExampleGraphs:
    G: LyapunovGraph
    L: LyapunovGraph
    open_ends: frozenset


def build_section5() -> ExampleGraphs:
    """Graphs of the 2T^2 example on S^1 x S^2.

    ``G`` is the graph of the piece built from the thickened template: one
    saddle with incoming boundary levels of genus 2 and 0 and an outgoing
    torus level.  Its three dangling ends are explicit boundary vertices
    listed in ``open_ends``; they are placeholders, not dynamics, so ``G`` is
    not expected to pass the closed-graph balance test at those ends.

    ``L`` is the closed graph of the flow on S^1 x S^2: the double of ``G``
    with the two sphere ends glued, i.e. a repeller, two saddles joined by
    parallel edges of weights 2 and 0, and an attractor.
    """
    G = LyapunovGraph(
        {
            "x1": RepellerOrbit(),
            "x2": RepellerOrbit(),
            "v": Saddle(GADGET_MATRIX),
            "y": AttractorOrbit(),
        },
        [
            Edge("X1", "x1", "v", 2),
            Edge("X2", "x2", "v", 0),
            Edge("Y", "v", "y", 1),
        ],
    )
    L = LyapunovGraph(
        {
            "r": RepellerOrbit(),
            "v-": Saddle(GADGET_MATRIX),
            "v+": Saddle(GADGET_MATRIX),
            "a": AttractorOrbit(),
        },
        [
            Edge("in", "r", "v-", 1),
            Edge("T2", "v-", "v+", 2),
            Edge("S2", "v-", "v+", 0),
            Edge("out", "v+", "a", 1),
        ],
    )
    return ExampleGraphs(G=G, L=L, open_ends=frozenset({"x1", "x2", "y"}))


def random_nsf_graph(rng: random.Random, max_vertices: int = 20) -> LyapunovGraph:
    """Random connected acyclic orbit/saddle graph satisfying the NSF balance.

    Writing ``f(e) = 1 - weight(e)``, balance at every vertex is conservation
    of ``f``, so ``f`` must lie in the cycle space.  Start from all weights 1
    (``f = 0``) and add random signed cycle vectors while ``f <= 1``.  Every
    sink is an attractor reached by a single weight-1 edge.
    """
    if max_vertices < 2:
        raise ValueError("need room for a repeller and an attractor")
    n_core = rng.randint(0, max(0, max_vertices - 2))
    n_core = min(n_core, max_vertices - 2)
    # vertices 0..n_core-1 are saddles in topological order
    verts: dict = {}
    edges: list[list] = []
    names = [f"s{i}" for i in range(n_core)]
    for nm in names:
        verts[nm] = Saddle(IntMatrix(((1, 1), (1, 1))) if rng.random() < 0.5 else GADGET_MATRIX)
    verts["R"] = RepellerOrbit()
    verts["A"] = AttractorOrbit()
    order = ["R"] + names + ["A"]
    # spine guarantees connectivity; extra forward arcs create cycles
    for a, b in zip(order, order[1:]):
        edges.append([a, b, 1])
    budget = max_vertices - len(order)
    for _ in range(rng.randint(0, 2 * len(order))):
        i = rng.randrange(0, len(order) - 1)
        j = rng.randrange(i + 1, len(order))
        a, b = order[i], order[j]
        if a == "R" or b == "A":
            # terminal orbits keep a single weight-1 edge
            continue
        edges.append([a, b, 1])
    # extra attractor / repeller leaves on saddles
    for nm in names:
        if budget > 0 and rng.random() < 0.3:
            leaf = f"A{len(verts)}"
            verts[leaf] = AttractorOrbit()
            edges.append([nm, leaf, 1])
            budget -= 1
        if budget > 0 and rng.random() < 0.3:
            leaf = f"R{len(verts)}"
            verts[leaf] = RepellerOrbit()
            edges.append([leaf, nm, 1])
            budget -= 1

    # cycle vectors: for a chord (a->b) and the spine path a..b, push flux around
    pos = {v: i for i, v in enumerate(order)}
    spine_index = {(order[i], order[i + 1]): i for i in range(len(order) - 1)}
    for _ in range(rng.randint(0, 6)):
        chords = [k for k, e in enumerate(edges) if k >= len(order) - 1 and e[0] in pos and e[1] in pos]
        if not chords:
            break
        k = rng.choice(chords)
        a, b = edges[k][0], edges[k][1]
        path = [spine_index[(order[i], order[i + 1])] for i in range(pos[a], pos[b])]
        sign = rng.choice((1, -1))
        # f(chord) += sign, f(path edges) -= sign  (weights move oppositely)
        trial = [list(e) for e in edges]
        trial[k][2] -= sign
        for p in path:
            trial[p][2] += sign
        if all(e[2] >= 0 for e in trial) and _terminals_ok(trial, verts):
            edges = trial
    return LyapunovGraph(verts, [Edge(f"e{k}", a, b, w) for k, (a, b, w) in enumerate(edges)])


def _terminals_ok(edges, verts) -> bool:
    for a, b, w in edges:
        if isinstance(verts[b], AttractorOrbit) and w != 1:
            return False
        if isinstance(verts[a], RepellerOrbit) and w != 1:
            return False
    return True
