import pytest
from hypothesis import given

from nsflow.builders import build_lemma34, build_prop35, build_section5
from nsflow.gf2 import IntMatrix
from nsflow.graph import (
    AttractorOrbit,
    Edge,
    LyapunovGraph,
    RepellerOrbit,
    Saddle,
    Singularity,
    check_s3,
    check_template_vertex,
    cycle_rank,
    deletable_edges,
    has_oriented_cycle,
    iter_residuals,
    nsf_balance_check,
    reachable_by_nonzero,
    summand_lower_bound,
    validate_abstract,
    vanishing_zero_edges,
    vertex_residual,
)
from nsflow.template import BoundaryReport
from oracles import nx_connected_after_removal, nx_cycle_rank, nx_is_acyclic
from strategies import dags, multigraphs, nsf_graphs

ONE = IntMatrix(((1,),))


def codes(diags):
    return sorted({d.code for d in diags})


def star(in_weights, out_weights, label=None):
    """Saddle ``v`` with one repeller per incoming and one attractor per outgoing edge."""
    verts = {"v": label or Saddle(ONE)}
    edges = []
    for i, w in enumerate(in_weights):
        verts[f"r{i}"] = RepellerOrbit()
        edges.append(Edge(f"in{i}", f"r{i}", "v", w))
    for i, w in enumerate(out_weights):
        verts[f"a{i}"] = AttractorOrbit()
        edges.append(Edge(f"out{i}", "v", f"a{i}", w))
    return LyapunovGraph(verts, edges)


# --------------------------------------------------------------------------
# construction and validation


def test_constructor_rejects_bad_references():
    with pytest.raises(ValueError):
        LyapunovGraph({"a": AttractorOrbit()}, [Edge("e", "a", "b", 1)])
    with pytest.raises(ValueError):
        LyapunovGraph({"a": AttractorOrbit(), "b": RepellerOrbit()}, [Edge("e", "b", "a", 1), Edge("e", "b", "a", 1)])
    with pytest.raises(ValueError):
        LyapunovGraph([("a", AttractorOrbit()), ("a", RepellerOrbit())])
    with pytest.raises(ValueError):
        Singularity(4)


def test_single_attractor_is_valid():
    assert validate_abstract(LyapunovGraph({"a": AttractorOrbit()})) == []


def test_two_cycle_flagged():
    L = LyapunovGraph({"u": Saddle(ONE), "v": Saddle(ONE)}, [Edge("a", "u", "v", 1), Edge("b", "v", "u", 1)])
    assert "cycle" in codes(validate_abstract(L))


def test_other_abstract_diagnostics():
    L = LyapunovGraph(
        {"u": Saddle([[1, 0], [1, 1]]), "v": AttractorOrbit(), "w": AttractorOrbit()},
        [Edge("a", "u", "v", -1), Edge("b", "w", "w", 1)],
    )
    assert codes(validate_abstract(L)) == ["disconnected", "negative-weight", "reducible-matrix", "self-loop"]
    assert codes(validate_abstract(LyapunovGraph({}))) == ["empty"]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_generated_graphs_validate(n):
    assert validate_abstract(build_lemma34(n)) == []
    assert validate_abstract(build_prop35(n)) == []


@given(multigraphs(max_vertices=6, max_edges=9))
def test_acyclicity_matches_oracle(L):
    assert has_oriented_cycle(L) == (not nx_is_acyclic(L))


@given(dags())
def test_generated_dags_are_acyclic(L):
    assert not has_oriented_cycle(L)
    assert "cycle" not in codes(validate_abstract(L))


# --------------------------------------------------------------------------
# cycle rank


def test_cycle_rank_examples():
    assert cycle_rank(build_lemma34(3)) == 0
    assert cycle_rank(build_section5().L) == 1
    for n in range(1, 6):
        assert cycle_rank(build_prop35(n)) == n


def test_cycle_rank_disconnected_raises():
    with pytest.raises(ValueError):
        cycle_rank(LyapunovGraph({"a": AttractorOrbit(), "b": AttractorOrbit()}))


@given(dags(max_vertices=8, max_edges=14))
def test_cycle_rank_matches_spanning_tree_oracle(L):
    assert cycle_rank(L) == nx_cycle_rank(L)


# --------------------------------------------------------------------------
# residuals and balance


def test_residual_examples():
    assert vertex_residual(LyapunovGraph({"x": Saddle(ONE)}), "x") == 0
    L = LyapunovGraph({"r": RepellerOrbit(), "a": AttractorOrbit()}, [Edge("e", "r", "a", 1)])
    assert vertex_residual(L, "a") == 0
    assert vertex_residual(star([1, 1], [1]), "v") == 0


def test_balance_examples():
    assert nsf_balance_check(build_lemma34(1)) == []
    L = LyapunovGraph({"s": Saddle(ONE), "a": Singularity(0)}, [Edge("f", "s", "a", 0)])
    assert [d.vertex for d in nsf_balance_check(L)] == ["s"]  # the sink itself is balanced


@pytest.mark.parametrize("eid", [e.id for e in build_lemma34(1).edges])
def test_increment_flags_exactly_the_endpoints(eid):
    L = build_lemma34(1)
    e = L.edge(eid)
    flagged = {d.vertex for d in nsf_balance_check(L.with_weight(eid, e.weight + 1))}
    assert flagged == {e.src, e.dst}


@given(multigraphs(allow_loops=True))
def test_residuals_sum_to_zero(L):
    assert sum(vertex_residual(L, v) for v in L.vertices) == 0


@given(nsf_graphs)
def test_random_nsf_graphs_are_balanced(L):
    assert validate_abstract(L) == []
    assert nsf_balance_check(L) == []
    assert all(a == r == 0 for _, a, r in iter_residuals(L))


# --------------------------------------------------------------------------
# the 3-sphere check


@pytest.mark.parametrize("n", range(1, 6))
def test_s3_passes_on_generated_trees(n):
    rep = check_s3(build_lemma34(n))
    assert rep.passed, rep.failures()


def test_s3_spliced_graph_fails_tree_condition():
    rep = check_s3(build_prop35(1))
    assert not rep.condition1.passed
    assert rep.condition2.passed and rep.condition3.passed


def test_s3_saddle_bound_after_matrix_swap():
    L = build_lemma34(2).with_label("u2", Saddle([[2]]))
    rep = check_s3(L)
    assert not rep.condition2.passed
    assert {d.vertex for d in rep.condition2.details} == {"u2"}


def test_s3_precondition_labels():
    L = LyapunovGraph({"s": Saddle(ONE), "t": Saddle(ONE)}, [Edge("e", "s", "t", 1)])
    rep = check_s3(L)
    assert codes(rep.preconditions) == ["sink-label", "source-label"]
    assert not rep.passed


def test_s3_terminal_degree():
    L = LyapunovGraph(
        {"r": RepellerOrbit(), "s": Saddle(ONE), "a": AttractorOrbit()},
        [Edge("e1", "r", "s", 1), Edge("e2", "s", "a", 1), Edge("e3", "r", "a", 0)],
    )
    assert "terminal-degree" in codes(check_s3(L).condition1.details)


@pytest.mark.parametrize("n", range(1, 5))
def test_s3_mutation_sensitivity(n):
    L = build_lemma34(n)
    for e in L.edges:
        for d in (-1, 1):
            assert not check_s3(L.with_weight(e.id, e.weight + d)).passed, (e.id, d)
        assert not check_s3(L.without_edges([e.id])).passed, e.id


@given(nsf_graphs)
def test_s3_condition_three_is_balance(L):
    assert check_s3(L).condition3.passed == (nsf_balance_check(L) == [])


# --------------------------------------------------------------------------
# reachability and summands


def test_reachability_examples():
    L = LyapunovGraph({"u": Saddle(ONE), "v": Saddle(ONE)}, [Edge("e", "u", "v", 0)])
    assert reachable_by_nonzero(L, "u", "forward") == {"u"}
    L = L.with_weight("e", 2)
    assert reachable_by_nonzero(L, "u", "forward") == {"u", "v"}
    assert reachable_by_nonzero(L, "v", "backward") == {"u", "v"}
    L5 = build_section5().L
    assert reachable_by_nonzero(L5, L5.edge("T2").dst) == {"v+", "a"}
    with pytest.raises(ValueError):
        reachable_by_nonzero(L, "u", "sideways")


def test_vanishing_edges_examples():
    tree = star([1, 1], [1])
    assert all(vanishing_zero_edges(tree, e.id) == [] for e in tree.edges)
    for n in (1, 2, 3):
        assert vanishing_zero_edges(build_lemma34(n), "E") == sorted(f"h{j}" for j in range(1, n + 1))
        assert vanishing_zero_edges(build_prop35(n), "E") == sorted(f"s{j}" for j in range(1, n + 1))


def test_summands_low_weights():
    b = summand_lower_bound(star([1, 1], [1]))
    assert (b.n, b.certificate, b.ok) == (0, (), True)


@pytest.mark.parametrize("n", range(1, 6))
def test_summands_spliced(n):
    L = build_prop35(n)
    b = summand_lower_bound(L)
    assert b.ok and b.n == n and len(b.certificate) == n
    assert b.cycle_rank_ok
    assert nx_connected_after_removal(L, set(b.certificate))


def test_summands_on_tree_has_no_certificate():
    # cutting any edge of a tree disconnects it, so the sink-side sphere edges
    # of the generated tree cannot serve as a certificate
    b = summand_lower_bound(build_lemma34(2))
    assert b.n == 2 and not b.ok
    assert codes(b.diagnostics) == ["no-certificate"]


def test_summands_closed_example():
    b = summand_lower_bound(build_section5().L)
    assert (b.n, b.certificate, b.ok) == (1, ("S2",), True)


@given(dags(max_vertices=7, max_edges=12))
def test_certificates_keep_graph_connected(L):
    b = summand_lower_bound(L)
    if b.ok:
        assert len(b.certificate) == b.n
        assert nx_connected_after_removal(L, set(b.certificate))
        zero = {e.id for e in L.edges if e.weight == 0}
        assert set(b.certificate) <= zero


@given(dags(max_vertices=7, max_edges=12))
def test_deletable_edges_is_maximal(L):
    cand = [e.id for e in L.edges]
    keep = deletable_edges(L, cand)
    assert nx_connected_after_removal(L, set(keep))
    # any spanning forest complement is maximal, so the size is |E| - |V| + 1
    assert len(keep) == nx_cycle_rank(L)


# --------------------------------------------------------------------------
# template compatibility


def test_template_vertex_empty_requirements():
    rep = BoundaryReport.from_genera([0, 1], [0])
    res = check_template_vertex(star([1, 1], [1]), "v", rep)
    assert res.g_T == 0 and res.s_ok and res.genus_ok and res.summand_ok


def test_template_vertex_single_heavy_edge():
    rep = BoundaryReport.from_genera([2], [0])
    L = star([2], [1], label=Saddle(ONE))
    res = check_template_vertex(L, "v", rep)
    assert res.g_T == 1 and res.s == 1
    assert res.s_ok and res.genus_ok


def test_template_vertex_too_many_heavy_edges():
    rep = BoundaryReport.from_genera([2], [0])
    res = check_template_vertex(star([2, 2], [1]), "v", rep)
    assert not res.s_ok


def test_template_vertex_summand_certificate():
    # v- carries the parallel weight-2 / weight-0 pair of the closed fixture
    L = build_section5().L
    rep = BoundaryReport.from_genera([1], [2])
    res = check_template_vertex(L, "v-", rep)
    assert res.side == "exit" and res.g_T == 1
    assert res.certificate == ("S2",) and res.passed


def test_template_vertex_requires_saddle():
    with pytest.raises(ValueError):
        check_template_vertex(build_section5().L, "a", BoundaryReport.from_genera([0], [0]))


def test_reversal_swaps_terminal_labels():
    L = build_lemma34(2)
    R = L.reversed()
    assert isinstance(R.label("R"), AttractorOrbit)
    assert R.label("a1") == Singularity(3)
    assert nsf_balance_check(R) == []
    assert R.reversed() == L
