import json

import pytest
from hypothesis import given

from nsflow.builders import build_lemma34, build_prop35, build_section5
from nsflow.documents import (
    DocumentError,
    export_dot,
    graph_from_doc,
    graph_to_doc,
    parse_dot,
    template_from_doc,
    template_to_doc,
    template_to_dot,
)
from nsflow.template import build_lorenz, enumerate_small_templates
from strategies import dags


def doc_of(L):
    return graph_to_doc(L)


@pytest.mark.parametrize("L", [build_lemma34(2), build_prop35(3), build_section5().L, build_section5().G])
def test_graph_round_trip(L):
    d = doc_of(L)
    assert graph_from_doc(json.loads(json.dumps(d))) == L
    assert graph_to_doc(graph_from_doc(d)) == d


@given(dags())
def test_graph_round_trip_random(L):
    d = graph_to_doc(L)
    assert graph_to_doc(graph_from_doc(d)) == d
    assert parse_dot(export_dot(d)) == d


def test_template_round_trip():
    for T in list(enumerate_small_templates(2)) + [build_lorenz((1, 0, 1))]:
        d = template_to_doc(T)
        assert template_from_doc(json.loads(json.dumps(d))) == T


def test_dot_single_attractor():
    text = export_dot({"vertices": [{"id": "a", "label": {"kind": "attractor"}}], "edges": []})
    assert text == 'digraph lyapunov {\n  rankdir=TB;\n  "a" [shape=doublecircle];\n}\n'


def test_dot_closed_fixture():
    d = graph_to_doc(build_section5().L)
    text = export_dot(d)
    assert text.count("shape=") == 4
    assert text.count("->") == 4
    assert 'label="2"' in text and 'label="0"' in text
    assert export_dot(d) == text
    assert parse_dot(text) == d


def test_dot_escapes_quotes():
    d = {
        "vertices": [
            {"id": 'we"ird\\', "label": {"kind": "singularity", "index": 3}},
            {"id": "b", "label": {"kind": "saddle", "matrix": [[1, 2], [2, 1]]}},
        ],
        "edges": [{"id": 'e"1', "from": 'we"ird\\', "to": "b", "weight": 0}],
    }
    assert parse_dot(export_dot(d)) == d


def test_template_dot():
    text = template_to_dot(build_lorenz((0, 1, 0)))
    assert text.count("->") == 3 and text.count("style=dashed") == 1


BAD_GRAPHS = [
    ([], ""),
    ({"vertices": []}, "/edges"),
    ({"vertices": [{"id": "a"}], "edges": []}, "/vertices/0/label"),
    ({"vertices": [{"id": "a", "label": {"kind": "blob"}}], "edges": []}, "/vertices/0/label/kind"),
    ({"vertices": [{"id": "a", "label": {"kind": "saddle"}}], "edges": []}, "/vertices/0/label/matrix"),
    ({"vertices": [{"id": "a", "label": {"kind": "saddle", "matrix": [[1, 2]]}}], "edges": []}, "/vertices/0/label/matrix"),
    ({"vertices": [{"id": "a", "label": {"kind": "attractor", "matrix": [[1]]}}], "edges": []}, "/vertices/0/label/matrix"),
    ({"vertices": [{"id": "a", "label": {"kind": "singularity", "index": 5}}], "edges": []}, "/vertices/0/label/index"),
    ({"vertices": [{"id": "a", "label": {"kind": "repeller", "index": 0}}], "edges": []}, "/vertices/0/label/index"),
    (
        {"vertices": [{"id": "a", "label": {"kind": "attractor"}}, {"id": "a", "label": {"kind": "attractor"}}], "edges": []},
        "/vertices/1/id",
    ),
    ({"vertices": [{"id": "a", "label": {"kind": "attractor"}}], "edges": [{"id": "e", "from": "a", "to": "z", "weight": 1}]}, "/edges/0/to"),
    ({"vertices": [{"id": "a", "label": {"kind": "attractor"}}], "edges": [{"id": "e", "from": "a", "to": "a", "weight": -1}]}, "/edges/0/weight"),
    ({"vertices": [{"id": "a", "label": {"kind": "attractor"}}], "edges": [{"id": "e", "from": "a", "to": "a", "weight": True}]}, "/edges/0/weight"),
    ({"vertices": [], "edges": [], "extra": 1}, ""),
]


@pytest.mark.parametrize("doc,where", BAD_GRAPHS)
def test_graph_schema_errors(doc, where):
    with pytest.raises(DocumentError) as ei:
        graph_from_doc(doc)
    assert ei.value.where == where


BAD_TEMPLATES = [
    ({"charts": []}, "/strips"),
    ({"charts": [{"id": "J", "kind": "joiner"}], "strips": []}, "/charts/0/kind"),
    ({"charts": [{"id": "J", "kind": "joining"}, {"id": "J", "kind": "joining"}], "strips": []}, "/charts/1/id"),
    ({"charts": [], "strips": [{"from": ["J"], "to": ["S", "in"]}]}, "/strips/0/from"),
    ({"charts": [], "strips": [{"from": ["J", "bottom"], "to": ["S", "in"]}]}, "/strips/0/from"),
    ({"charts": [], "strips": [{"from": ["J", "out"], "to": ["S", "in"], "twist": 3}]}, "/strips/0/twist"),
]


@pytest.mark.parametrize("doc,where", BAD_TEMPLATES)
def test_template_schema_errors(doc, where):
    with pytest.raises(DocumentError) as ei:
        template_from_doc(doc)
    assert ei.value.where == where


def test_parse_dot_rejects_foreign_text():
    with pytest.raises(DocumentError):
        parse_dot("digraph x {\n  a -> b;\n}\n")
