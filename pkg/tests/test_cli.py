import io
import json
from pathlib import Path

import pytest

from raagstab.cli import main, parse_graph, ParseError
from raagstab.config import RunConfig

NINE = str(Path(__file__).resolve().parents[1] / "data" / "nine_vertex.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", NINE, "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["height"] == 3
    adm = {c["rep"]: set(c["admissible"]) for c in rep["classes"]}
    assert adm["i"] == set("cdehi")
    assert {c["rep"]: c["case"] for c in rep["classes"]}["e"] == "abelian"
    assert len(rep["cover"]) == 7


def test_analyze_text_and_dot(capsys):
    code, out, _ = run(capsys, "analyze", NINE)
    assert code == 0 and out.startswith("height 3")
    assert "level 2: v={c,f,g}" in out
    code, out, _ = run(capsys, "analyze", NINE, "--dot")
    assert code == 0 and out.startswith("digraph")


def test_analyze_single_vertex_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("x  # lone vertex\n"))
    code, out, _ = run(capsys, "analyze", "-", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["height"] == 0 and rep["vertices"] == ["x"]


def test_edge_list(tmp_path, capsys):
    f = tmp_path / "p3.txt"
    f.write_text("# path\nu v\nv w\n")
    code, out, _ = run(capsys, "analyze", str(f), "--format", "json")
    assert code == 0
    assert json.loads(out)["vertices"] == ["u", "v", "w"]


@pytest.mark.parametrize("text", [
    '{"vertices": ["a", "a"], "edges": []}',
    '{"vertices": ["a"], "edges": [["a", "a"]]}',
    '{"vertices": ["a"], "edges": [["a", "b"]]}',
    "{not json",
    "a b c\n",
])
def test_malformed_graphs_exit_2(tmp_path, capsys, text):
    f = tmp_path / "g.json"
    f.write_text(text)
    code, _, err = run(capsys, "analyze", str(f))
    assert code == 2 and err


def test_missing_file_exit_2(capsys):
    assert run(capsys, "analyze", "/nonexistent/graph.json")[0] == 2


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", NINE, "tau i c; inv a; tau f d")
    assert code == 0 and "recomposes: True" in out
    code, out, _ = run(capsys, "decompose", NINE, "i=i c", "--format", "json")
    assert code == 0 and json.loads(out)["recomposes"] is True
    code, out, _ = run(capsys, "decompose", NINE, "id")
    assert code == 0


def test_decompose_rejects_conjugation(capsys):
    code, _, err = run(capsys, "decompose", NINE, "conj c")
    assert code == 3 and "stabiliser" in err


def test_decompose_rejects_non_homomorphism(capsys):
    assert run(capsys, "decompose", NINE, "a=a i")[0] == 3


def test_present_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "present", NINE, "--format", "text")
    assert code == 0 and out.startswith("<")
    code, out, _ = run(capsys, "present", NINE, "--format", "gap")
    assert code == 0
    target = tmp_path / "pres.json"
    code, out, _ = run(capsys, "present", NINE, "-o", str(target))
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert len(doc["generators"]) == 40
    run(capsys, "present", NINE, "-o", str(tmp_path / "again.json"))
    assert (tmp_path / "again.json").read_bytes() == target.read_bytes()


def test_present_eliminated(capsys):
    code, out, _ = run(capsys, "present", NINE, "--eliminate-perms")
    assert code == 0
    assert len(json.loads(out)["generators"]) == 36


def test_present_single_vertex(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO('{"vertices": ["x1"], "edges": []}'))
    code, out, _ = run(capsys, "present", "-", "--format", "text")
    assert code == 0
    assert out.split() == ["<", "inv:x1", "|", "inv:x1", "inv:x1", ">"]


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", NINE, "i", "inv:i inv:i")
    assert code == 0
    rep = json.loads(out)
    assert rep["identity"] is True and rep["certificate"]["steps"]
    code, out, _ = run(capsys, "certify", NINE, "i", "inv:i")
    rep = json.loads(out)
    assert code == 0 and rep == {"identity": False, "moved": "i", "image": "i^-1"}
    code, out, _ = run(capsys, "certify", NINE, "i", "1")
    assert code == 0 and json.loads(out)["certificate"]["steps"] == []


def test_certify_errors(capsys):
    assert run(capsys, "certify", NINE, "i", "bogus")[0] == 2
    assert run(capsys, "certify", NINE, "z", "1")[0] == 2
    assert run(capsys, "certify", NINE, "e", "1")[0] == 3


def test_wh_apply(capsys):
    code, out, _ = run(capsys, "wh", "apply", NINE, "tau i c", "i h")
    assert code == 0 and out.strip() == "h i c"
    code, out, _ = run(capsys, "wh", "apply", NINE, "conj h", "a", "--format", "json")
    rep = json.loads(out)
    assert rep["image"] == "h^-1 a h" and rep["conjugacy_length"] == 1
    assert rep["conjugacy_canonical"] == "a"


def test_determinism(capsys):
    first = run(capsys, "analyze", NINE, "--format", "json")[1]
    assert run(capsys, "analyze", NINE, "--format", "json")[1] == first


def test_bad_config_values():
    with pytest.raises(ValueError):
        RunConfig(depth=0)
    with pytest.raises(ValueError):
        RunConfig(fmt="xml")


def test_parse_graph_direct():
    g = parse_graph("a b\nb c\nd\n")
    assert list(g.vertices) == ["a", "b", "c", "d"]
    with pytest.raises(ParseError):
        parse_graph('{"edges": []}')
