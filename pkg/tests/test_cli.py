import hashlib
import json
import subprocess
import sys

import pytest

from drinfeld_tree.cli import RunConfig, config_from_args, main
from drinfeld_tree.errors import PreconditionError
from drinfeld_tree.quotient import build_quotient_graph
from conftest import ideal


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_quotient_graph_json(capsys):
    code, out, _ = run(["quotient-graph", "--ideal", "T^3+T+1", "--json"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["betti"] == 2 and obj["ideal"] == "T^3+T+1"
    # round trip: re-parsed emission equals the in-memory graph
    assert obj == json.loads(build_quotient_graph(ideal("T^3+T+1")).to_json())


def test_quotient_graph_dot(capsys):
    code, out, _ = run(["quotient-graph", "--ideal", "T^3+T+1", "--dot"], capsys)
    assert code == 0 and out.startswith("graph") and "--" in out


def test_hecke_matrix_csv(capsys):
    code, out, _ = run(["hecke-matrix", "--level", "T^3+T+1", "--prime", "T"], capsys)
    assert code == 0
    rows = [r.split(",") for r in out.splitlines()]
    assert len(rows) == 2 and all(len(r) == 2 for r in rows)
    code, out, _ = run(["hecke-matrix", "--level", "T^3+T+1", "--prime", "T", "--json"], capsys)
    assert json.loads(out)["matrix"] == [[int(x) for x in r] for r in rows]


def test_other_subcommands(capsys):
    code, out, _ = run(["winding", "--level", "T^3+T+1", "--prime", "T"], capsys)
    assert code == 0 and len(json.loads(out)["h1_coordinates"]) == 2
    code, out, _ = run(["modular-symbol", "--level", "T^3+T+1", "--a", "0", "--b", "inf"], capsys)
    obj = json.loads(out)
    assert code == 0 and sorted(t["constant"] for t in obj["tails"]) == [-1, 1]
    code, out, _ = run(["eisenstein-index", "--level", "T^3+T+1", "--degree-bound", "4"], capsys)
    assert code == 0 and json.loads(out)["index"] == 7
    code, out, _ = run(["torsion", "--g", "T+1", "--delta", "1"], capsys)
    assert code == 0 and "1" in json.loads(out)["points"]
    code, out, _ = run(["reduction-type", "--g", "1", "--delta", "1", "--prime", "T"], capsys)
    assert code == 0 and out.strip() == "ordinary"
    code, out, _ = run(["newton", "--g", "T", "--delta", "1", "--prime", "T"], capsys)
    assert code == 0 and json.loads(out)["slopes"] == [["1/3", 3]]


@pytest.mark.parametrize("argv,code", [
    (["quotient-graph", "--ideal", "T^3+"], 2),
    (["quotient-graph", "--ideal", "T^^2"], 2),
    (["hecke-matrix", "--level", "T^3+T+1", "--prime", "T^3+T+1"], 3),
    (["hecke-matrix", "--level", "T^3+T+1", "--prime", "T^2+1"], 3),
    (["hecke-matrix", "--level", "T", "--prime", "T+1"], 3),
    (["quotient-graph", "--ideal", "1"], 3),
    (["torsion", "--g", "1", "--delta", "0"], 3),
    (["modular-symbol", "--level", "T^3+T+1", "--a", "0", "--b", "0"], 3),
    (["--q", "1", "quotient-graph", "--ideal", "T"], 3),
    (["quotient-graph", "--ideal", "T", "--extra-depth", "-1"], 3),
    (["torsion", "--g", "1", "--delta", "1/0"], 2),
])
def test_exit_codes(argv, code, capsys):
    got, _, err = run(argv, capsys)
    assert got == code, err
    assert err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["quotient-graph"])
    assert exc.value.code == 2


def test_verify_subset(capsys):
    code, out, err = run(["verify", "--suite", "paper", "--criterion", "2", "--criterion", "11"], capsys)
    assert code == 0
    assert "# criterion 2" in out and "# 0 failed" in out and "FAIL" not in out
    assert "s\n" in err  # timings only on stderr


def test_verify_failure_exit_4(monkeypatch, capsys):
    from drinfeld_tree import checks

    monkeypatch.setitem(checks.CRITERIA, 2, lambda: [checks.CheckResult("forced", False)])
    code, out, err = run(["verify", "--criterion", "2"], capsys)
    assert code == 4 and "FAIL forced" in out and "forced" in err


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("DRINFELD_TREE_EXTRA_DEPTH", "5")
    monkeypatch.setenv("DRINFELD_TREE_DEGREE_BOUND", "3")
    cfg = config_from_args(["eisenstein-index", "--level", "T^3+T+1"])
    assert cfg.extra_depth == 5 and cfg.degree_bound == 3
    cfg = config_from_args(["eisenstein-index", "--level", "T^3+T+1", "--degree-bound", "4"])
    assert cfg.degree_bound == 4
    monkeypatch.setenv("DRINFELD_TREE_Q", "x")
    with pytest.raises(PreconditionError):
        config_from_args(["quotient-graph", "--ideal", "T"])


def test_config_validation():
    with pytest.raises(PreconditionError):
        RunConfig("torsion", deg_bound=0).validate()
    RunConfig("torsion").validate()


def test_output_file(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, out, _ = run(["-o", str(path), "quotient-graph", "--ideal", "T^2+T+1"], capsys)
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["betti"] == 0


def test_deterministic_across_processes():
    argvs = [["quotient-graph", "--ideal", "T^4+T^3+1", "--json"],
             ["hecke-matrix", "--level", "T^4+T^3+1", "--prime", "T^2+T+1"],
             ["verify", "--criterion", "3"]]
    for argv in argvs:
        digests = set()
        for seed in ("0", "123"):
            p = subprocess.run([sys.executable, "-m", "drinfeld_tree", *argv], capture_output=True,
                               env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"}, check=True)
            digests.add(hashlib.sha256(p.stdout).hexdigest())
        assert len(digests) == 1, argv
