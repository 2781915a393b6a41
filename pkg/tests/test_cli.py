import json

import pytest

from surfcross.cli import main


@pytest.fixture()
def k5_file(tmp_path):
    path = tmp_path / "k5.json"
    assert main(["gen", "complete", "--n", "5", "-o", str(path)]) == 0
    return path


def _out(capsys):
    return json.loads(capsys.readouterr().out)


def test_gen_writes_a_graph(tmp_path):
    path = tmp_path / "h3.json"
    assert main(["gen", "hamburger", "--n", "3", "-o", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert len(doc["edges"]) == 27


def test_gen_rejects_bad_parameters(capsys):
    assert main(["gen", "hamburger", "--n", "2"]) == 2
    assert main(["gen", "nosuch"]) == 2


def test_genus(k5_file, capsys):
    assert main(["genus", str(k5_file)]) == 0
    assert _out(capsys)["genus"] == 1
    assert main(["genus", str(k5_file), "--nonorientable"]) == 0
    assert _out(capsys)["genus"] == 1


def test_genus_budget_exhausted(tmp_path, capsys):
    path = tmp_path / "k7.json"
    main(["gen", "complete", "--n", "7", "-o", str(path)])
    assert main(["genus", str(path), "--budget", "5"]) == 3
    assert _out(capsys)["status"] == "unknown"


def test_cross_verify_render(k5_file, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    assert main(["cross", str(k5_file), "--genus", "0", "--cert", str(cert), "--deterministic"]) == 0
    assert _out(capsys)["crossings"] == 1
    assert main(["verify", str(cert)]) == 0
    assert _out(capsys)["accepted"]
    svg = tmp_path / "k5.svg"
    assert main(["render", str(cert), "-o", str(svg)]) == 0
    assert svg.read_text().lstrip().startswith("<?xml")


def test_tampered_certificate(k5_file, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    main(["cross", str(k5_file), "--genus", "0", "--cert", str(cert)])
    capsys.readouterr()
    doc = json.loads(cert.read_text())
    doc["count"] = 2
    cert.write_text(json.dumps(doc))
    assert main(["verify", str(cert)]) == 1
    assert _out(capsys)["reason"] == "count mismatch"
    assert main(["render", str(cert), "-o", str(tmp_path / "x.svg")]) == 1


def test_cross_infeasible_and_capped(tmp_path, capsys):
    doc = {"vertices": [{"id": f"v{i}"} for i in range(5)],
           "edges": [{"id": f"e{i}{j}", "ends": [f"v{i}", f"v{j}"], "thick": True}
                     for i in range(5) for j in range(i + 1, 5)]}
    path = tmp_path / "thick.json"
    path.write_text(json.dumps(doc))
    assert main(["cross", str(path), "--genus", "0"]) == 1
    assert _out(capsys)["status"] == "infeasible"
    main(["gen", "complete", "--n", "6", "-o", str(tmp_path / "k6.json")])
    assert main(["cross", str(tmp_path / "k6.json"), "--genus", "0", "--max-k", "1"]) == 3


def test_sequence(k5_file, capsys):
    assert main(["sequence", str(k5_file)]) == 0
    assert _out(capsys)["sequence"] == [1, 0]


def test_expand(tmp_path, capsys):
    path = tmp_path / "h3.json"
    main(["gen", "hamburger", "--n", "3", "-o", str(path)])
    out = tmp_path / "simple.json"
    assert main(["expand", str(path), "--gmax", "0", "--override-n", "1", "--bound", "3",
                 "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert not any(e.get("thick") for e in doc["edges"])
    assert not any("rigid" in v for v in doc["vertices"])


@pytest.mark.parametrize("argv", [
    ["cross", "missing.json", "--genus", "0"],
    ["verify", "missing.json"],
    ["cross"],
    ["cross", "x.json", "--genus", "-1"],
])
def test_invalid_input(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "x.json").write_text('{"vertices": [], "edges": []}')
    assert main(argv) == 2


def test_malformed_graph(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"vertices": [{"id": "a"}], "edges": [{"id": "e", "ends": ["a", "a"]}]}')
    assert main(["genus", str(path)]) == 2
    path.write_text("not json")
    assert main(["genus", str(path)]) == 2


def test_paper_suite_quick_subset_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a" / "r.json", tmp_path / "b" / "r.json"
    a.parent.mkdir()
    b.parent.mkdir()
    for rep in (a, b):
        code = main(["paper-suite", "--tier", "quick", "--only", "K5U2_sequence",
                     "--report", str(rep), "--deterministic"])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert (a.parent / "r.tsv").read_bytes() == (b.parent / "r.tsv").read_bytes()
    doc = json.loads(a.read_text())
    entry = doc["claims"][0]
    assert entry["status"] == "pass" and entry["computed"] == [2, 1, 0]
    assert "runtime_s" not in entry
    for rel in entry["certificates"]:
        assert (a.parent / rel).exists()
    for rel in doc["figures"]:
        assert (a.parent / rel).read_bytes() == (b.parent / rel).read_bytes()
