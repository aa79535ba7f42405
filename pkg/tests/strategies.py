"""Hypothesis strategies shared by the test modules."""

import random

from hypothesis import strategies as st

from nsflow.builders import random_nsf_graph
from nsflow.gf2 import IntMatrix
from nsflow.graph import AttractorOrbit, Edge, LyapunovGraph, RepellerOrbit, Saddle, Singularity

labels = st.sampled_from(
    [AttractorOrbit(), RepellerOrbit(), Saddle(IntMatrix(((1,),))), Saddle(IntMatrix(((1, 2), (2, 1)))), Singularity(0), Singularity(3)]
)


@st.composite
def multigraphs(draw, max_vertices=8, max_edges=12, allow_loops=False):
    """Arbitrary labelled multigraphs: may be disconnected or cyclic."""
    n = draw(st.integers(1, max_vertices))
    names = [f"v{i}" for i in range(n)]
    verts = {v: draw(labels) for v in names}
    m = draw(st.integers(0, max_edges))
    edges = []
    for i in range(m):
        a = draw(st.sampled_from(names))
        b = draw(st.sampled_from(names))
        if a == b and not allow_loops:
            continue
        edges.append(Edge(f"e{i}", a, b, draw(st.integers(0, 3))))
    return LyapunovGraph(verts, edges)


@st.composite
def dags(draw, max_vertices=8, max_edges=12):
    """Connected acyclic multigraphs (edges point from lower to higher index)."""
    n = draw(st.integers(1, max_vertices))
    names = [f"v{i}" for i in range(n)]
    verts = {v: draw(labels) for v in names}
    edges = []
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        a, b = sorted((i, j))
        edges.append(Edge(f"t{i}", names[a], names[b], draw(st.integers(0, 3))))
    for k in range(draw(st.integers(0, max_edges - len(edges))) if max_edges > len(edges) else 0):
        if n < 2:
            break
        i, j = sorted(draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True)))
        edges.append(Edge(f"c{k}", names[i], names[j], draw(st.integers(0, 3))))
    return LyapunovGraph(verts, edges)


nsf_graphs = st.builds(lambda seed, nv: random_nsf_graph(random.Random(seed), nv), st.integers(0, 2**32), st.integers(2, 20))
