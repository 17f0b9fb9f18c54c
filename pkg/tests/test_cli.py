import json

import pytest

from permutree_lab import cli


def run_cli(capsys, *argv):
    try:
        cli.main(list(argv))
        code = 0
    except SystemExit as exc:
        code = exc.code or 0
    out, err = capsys.readouterr()
    return code, out, err


def test_permutree_count(capsys):
    code, out, _ = run_cli(capsys, "permutree", "count", "--delta", "nddn", "--n", "4")
    assert code == 0
    assert "count: 14" in out


def test_permutree_count_json_deterministic(capsys):
    code, out1, _ = run_cli(capsys, "permutree", "count", "--delta", "nxdn", "--json")
    code, out2, _ = run_cli(capsys, "permutree", "count", "--delta", "nxdn", "--json")
    assert out1 == out2
    assert json.loads(out1) == {"delta": "nxdn", "count": 10}


def test_permutree_sort(capsys):
    code, out, _ = run_cli(capsys, "permutree", "sort", "--pi", "3421", "--U", "2", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["sorted"] is True
    assert data["word"] == "2,1,3,2,3"
    code, out, _ = run_cli(capsys, "permutree", "sort", "--pi", "4231", "--U", "2", "--json")
    data = json.loads(out)
    assert data["sorted"] is False and data["residual"] == "1243"


def test_permutree_lattice_json(capsys):
    code, out, _ = run_cli(capsys, "permutree", "lattice", "--delta", "nxn", "--json")
    data = json.loads(out)
    assert len(data["nodes"]) == 4
    assert len(data["edges"]) == 4


def test_permutree_insert(capsys):
    code, out, _ = run_cli(
        capsys, "permutree", "insert", "--pi", "5741326", "--delta", "dunxndd", "--json"
    )
    data = json.loads(out)
    assert data["n"] == 7 and data["delta"] == "nunxndn"


def test_sorder_verbs(capsys):
    code, out, _ = run_cli(capsys, "sorder", "count", "--s", "1,2,2", "--json")
    assert json.loads(out)["count"] == 15
    code, out, _ = run_cli(capsys, "sorder", "hasse", "--s", "1,2,1", "--json")
    data = json.loads(out)
    assert len(data["nodes"]) == 8
    code, out, _ = run_cli(capsys, "sorder", "realize", "--s", "1,2,1", "--json")
    data = json.loads(out)
    assert len(data["vertices"]) == 8
    assert set(data["epsilon"]) == {"num", "den"}
    code, out, _ = run_cli(capsys, "sorder", "identities", "--s", "1,0,1", "--json")
    assert json.loads(out)["equal"] is True


def test_sorder_realize_approx(capsys):
    code, out, _ = run_cli(
        capsys, "sorder", "realize", "--s", "1,1", "--json", "--approx", "4"
    )
    data = json.loads(out)
    for pt in data["vertices"].values():
        assert all(isinstance(x, float) for x in pt)


def test_flows_verbs(capsys):
    code, out, _ = run_cli(capsys, "flows", "routes", "--s", "1,2,1", "--json")
    assert json.loads(out)["count"] == 10
    code, out, _ = run_cli(capsys, "flows", "cliques", "--s", "1,2,1", "--json")
    assert json.loads(out)["count"] == 8
    code, out, _ = run_cli(
        capsys, "flows", "kostant", "--delta", "nxdn", "--netflow", "d", "--json"
    )
    assert json.loads(out)["kostant"] == 10
    code, out, _ = run_cli(
        capsys, "flows", "volume", "--s", "1,2,2", "--netflow", "i", "--json"
    )
    assert json.loads(out)["volume"] == 15


def test_flows_graph_file(tmp_path, capsys):
    from permutree_lab import flows as fl

    path = tmp_path / "graph.json"
    path.write_text(json.dumps(fl.example_graph().to_json()))
    code, out, _ = run_cli(
        capsys, "flows", "kostant", "--graph", str(path), "--netflow", "0,1,1,-2", "--json"
    )
    assert json.loads(out)["kostant"] == 2


def test_bicho_verbs(capsys):
    code, out, _ = run_cli(capsys, "bicho", "verify", "--delta", "nxdn", "--json")
    data = json.loads(out)
    assert data["ok"] and data["counts"] == {"flows": 10, "permutrees": 10, "cliques": 10}
    code, out, _ = run_cli(capsys, "bicho", "conjectures", "--delta", "nddn", "--json")
    data = json.loads(out)
    assert data["conjecture_1"] == "PASS" and data["conjecture_2"] == "PASS"
    code, out, _ = run_cli(capsys, "bicho", "build", "--delta", "nnn", "--json")
    data = json.loads(out)
    assert data["vertices"] == 4 and len(data["edges"]) == 6


def test_exit_codes(capsys):
    code, _, err = run_cli(capsys, "permutree", "lattice", "--delta", "n" * 10)
    assert code == 2 and "cap" in err
    code, _, err = run_cli(capsys, "permutree", "insert", "--pi", "1231", "--delta", "nnnn")
    assert code == 1 and "invalid input" in err
    code, _, err = run_cli(capsys, "permutree", "sort", "--pi", "321", "--U", "2", "--D", "2")
    assert code == 1
    code, _, err = run_cli(capsys, "flows", "routes", "--json")
    assert code == 1  # no graph source given


def test_cap_flag_overrides(capsys, monkeypatch):
    monkeypatch.setenv("PERMUTREE_LAB_CAP", "3")
    code, _, err = run_cli(capsys, "permutree", "lattice", "--delta", "nnnn")
    assert code == 2
    code, out, _ = run_cli(
        capsys, "permutree", "lattice", "--delta", "nnnn", "--cap", "4", "--json"
    )
    assert code == 0
    assert len(json.loads(out)["nodes"]) == 24


def test_verify_quick(capsys):
    code, out, _ = run_cli(capsys, "verify", "permutree")
    assert code == 0
    assert "[PASS]" in out and "FAIL" not in out
    code, _, err = run_cli(capsys, "verify", "nonsense")
    assert code == 1
