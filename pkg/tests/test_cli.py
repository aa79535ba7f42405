import io
import json
import subprocess
import sys

import pytest

from nsflow.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)

    return write


def test_generated_tree_passes(tmp_path):
    g = str(tmp_path / "g.json")
    assert call("gen", "lemma34", "--n", "2", "-o", g)[0] == 0
    code, out, _ = call("graph", "s3check", g)
    assert code == 0 and "S3: PASS" in out


def test_spliced_graph_fails_s3(tmp_path):
    g = str(tmp_path / "g.json")
    assert call("gen", "prop35", "--n", "2", "-o", g)[0] == 0
    code, out, _ = call("graph", "s3check", g)
    assert code == 1 and "not-tree" in out
    code, out, _ = call("graph", "summands", "--json", g)
    rec = json.loads(out)
    assert code == 0 and rec["n"] == 2 and rec["ok"] and rec["certificate"] == ["s1", "s2"]


def test_validate_cycle(files):
    doc = {
        "vertices": [{"id": "u", "label": {"kind": "saddle", "matrix": [[1]]}}, {"id": "v", "label": {"kind": "saddle", "matrix": [[1]]}}],
        "edges": [{"id": "a", "from": "u", "to": "v", "weight": 1}, {"id": "b", "from": "v", "to": "u", "weight": 1}],
    }
    code, out, _ = call("graph", "validate", files("c.json", doc))
    assert code == 1 and "cycle" in out
    code, out, _ = call("graph", "validate", "--json", files("c.json", doc))
    assert code == 1 and {d["code"] for d in json.loads(out)["diagnostics"]} == {"cycle"}


def test_residuals(tmp_path, files):
    g = str(tmp_path / "g.json")
    call("gen", "lemma34", "--n", "1", "-o", g)
    code, out, _ = call("graph", "residuals", g)
    assert code == 0 and "mismatch" not in out
    doc = json.loads(open(g).read())
    doc["edges"][0]["weight"] = 2
    code, out, _ = call("graph", "residuals", files("bad.json", doc))
    assert code == 1 and out.count("mismatch") == 2


def test_surgery(tmp_path):
    a, b, o = (str(tmp_path / n) for n in ("a.json", "b.json", "o.json"))
    call("gen", "prop35", "--n", "1", "-o", a)
    call("gen", "prop35", "--n", "2", "-o", b)
    assert call("graph", "surgery", "--left", a, "--left-edge", "ew1", "--right", b, "--right-edge", "ew1", "-o", o)[0] == 0
    code, out, _ = call("graph", "summands", "--json", o)
    assert json.loads(out)["cycle_rank"] == 3
    code, _, err = call("graph", "surgery", "--left", a, "--left-edge", "E", "--right", b, "--right-edge", "ew1")
    assert code == 1 and "weight 2" in err


def test_example_graphs_and_dot(tmp_path):
    d = tmp_path / "s5"
    assert call("gen", "section5", "-o", str(d))[0] == 0
    assert call("graph", "validate", str(d / "L.json"))[0] == 0
    code, out, _ = call("export", "dot", str(d / "L.json"))
    assert code == 0 and out.count("->") == 4
    assert call("export", "dot", str(d / "L.json"))[1] == out


def test_template_commands(tmp_path, files):
    t = str(tmp_path / "t.json")
    assert call("template", "lorenz", "-o", t)[0] == 0
    assert call("template", "validate", t)[0] == 0
    code, out, _ = call("template", "boundary", "--json", t)
    rec = json.loads(out)
    assert code == 0 and rec["total_boundary_euler"] == -2 and rec["closed_genera"] == [2]
    code, out, _ = call("template", "genus", t)
    assert (code, out) == (0, "0\n")
    code, out, _ = call("export", "dot", t)
    assert code == 0 and "digraph template" in out
    lone = files("lone.json", {"charts": [{"id": "J", "kind": "joining"}], "strips": []})
    code, out, _ = call("template", "validate", lone)
    assert code == 1 and "dangling-port" in out and "chart-balance" in out
    assert call("template", "boundary", lone)[0] == 1


def test_check_vertex(tmp_path):
    d = tmp_path / "s5"
    t = str(tmp_path / "t.json")
    call("gen", "section5", "-o", str(d))
    call("template", "lorenz", "-o", t)
    code, out, _ = call("template", "check-vertex", "--graph", str(d / "L.json"), "--vertex", "v-", "--template", t)
    assert code == 0 and "PASS" in out
    code, _, err = call("template", "check-vertex", "--graph", str(d / "L.json"), "--vertex", "zz", "--template", t)
    assert code == 2 and "zz" in err
    code, _, err = call("template", "check-vertex", "--graph", str(d / "L.json"), "--vertex", "a", "--template", t)
    assert code == 2 and "saddle" in err


@pytest.mark.parametrize(
    "content,needle",
    [("{", "invalid JSON"), ('{"vertices": [], "edges": 3}', "schema violation at /edges"), ("[]", "schema violation")],
)
def test_malformed_input(files, content, needle):
    code, out, err = call("graph", "validate", files("bad.json", content))
    assert code == 2 and needle in err and out == ""


def test_missing_file_and_usage():
    code, _, err = call("graph", "validate", "/nonexistent/x.json")
    assert code == 2 and "cannot read" in err
    code, _, err = call("frobnicate")
    assert code == 2 and "invalid choice" in err
    code, _, err = call("gen", "lemma34", "--n", "0")
    assert code == 2 and "n must be >= 1" in err
    code, _, err = call("graph")
    assert code == 2


def test_outputs_are_deterministic(tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"g{i}.json"
        call("gen", "prop35", "--n", "3", "-o", str(p))
        outs.append(p.read_bytes())
        outs.append(call("graph", "s3check", "--json", str(p))[1])
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_module_entry_point(tmp_path):
    r = subprocess.run(
        [sys.executable, "-m", "nsflow", "gen", "lemma34", "--n", "1"], capture_output=True, text=True, check=False
    )
    assert r.returncode == 0 and json.loads(r.stdout)["edges"]
