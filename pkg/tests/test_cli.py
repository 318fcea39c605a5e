import csv
import json

import numpy as np
import pytest

from sigpower.cli import main
from sigpower.core import SignedNetwork, State, states
from sigpower.io import read_matrix, read_network, write_network, write_powers
from sigpower.static_ne import verify_equilibrium

TRIANGLE = SignedNetwork.fully_antagonistic(3)


@pytest.fixture
def triangle(tmp_path):
    write_network(tmp_path / "net.json", TRIANGLE)
    write_powers(tmp_path / "p.csv", [1, 1, 2])
    return tmp_path


def test_gen_net_triangle(tmp_path, capsys):
    out = tmp_path / "net.json"
    assert main(["gen-net", "--n", "3", "--qe", "1", "--qn", "1", "--seed", "7", "--out", str(out)]) == 0
    net, _ = read_network(out)
    assert net.is_fully_antagonistic() and net.n == 3
    assert "3 edges" in capsys.readouterr().out


def test_static_ne_then_verify(triangle, capsys):
    eq = triangle / "eq.json"
    base = ["--net", str(triangle / "net.json"), "--powers", str(triangle / "p.csv")]
    assert main(["static-ne", *base, "--seed", "0", "--out", str(eq)]) == 0
    text = capsys.readouterr().out
    assert "adjustments:" in text and "potential trace:" in text
    X = read_matrix(eq)
    assert verify_equilibrium(TRIANGLE, [1, 1, 2], X) is None
    assert State.DANGEROUS not in states(TRIANGLE, X)
    meta = json.loads(eq.read_text())
    assert meta["config"]["seed"] == 0 and "states" in meta
    assert main(["verify-ne", *base, "--matrix", str(eq)]) == 0


def test_verify_corrupted_matrix_names_deviation(triangle, capsys):
    eq = triangle / "eq.json"
    eq.write_text(json.dumps([[1, 0, 0], [0, 1, 0], [0, 0, 2]]))
    code = main(["verify-ne", "--net", str(triangle / "net.json"), "--powers", str(triangle / "p.csv"), "--matrix", str(eq)])
    assert code == 1
    assert "deviation: node" in capsys.readouterr().out


def test_antagonistic_modes(tmp_path):
    write_powers(tmp_path / "p.csv", [5, 1, 1])
    out = tmp_path / "x.json"
    assert main(["antagonistic", "--powers", str(tmp_path / "p.csv"), "--mode", "dominant", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["states"] == "SPP"
    # the dominant country is too strong for an all-precarious equilibrium
    assert main(["antagonistic", "--powers", str(tmp_path / "p.csv"), "--out", str(out)]) == 2
    write_powers(tmp_path / "q.csv", [2, 1, 1])
    assert main(["antagonistic", "--powers", str(tmp_path / "q.csv"), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["states"] == "PPP"


def test_simulate_outputs_and_reproducibility(triangle):
    args = ["simulate", "--net", str(triangle / "net.json"), "--powers", str(triangle / "p.csv"), "--K", "6", "--seed", "3"]
    assert main([*args, "--traj", str(triangle / "a.csv"), "--matrices", str(triangle / "m.json")]) == 0
    assert main([*args, "--traj", str(triangle / "b.csv")]) == 0
    assert (triangle / "a.csv").read_text() == (triangle / "b.csv").read_text()
    summary = json.loads((triangle / "a.json").read_text())
    assert summary["status"] == "converged" and summary["config"]["K"] == 6
    with open(triangle / "a.csv", newline="") as fh:
        header = next(csv.reader(fh))
    assert header[:3] == ["t", "node", "states"]


def test_survival_command(triangle, capsys):
    write_powers(triangle / "p5.csv", [5, 1, 1])
    out = triangle / "surv.csv"
    args = ["survival", "--net", str(triangle / "net.json"), "--powers", str(triangle / "p5.csv"), "--runs", "20", "--iters", "200"]
    assert main([*args, "--out", str(out), "--threads", "1"]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert float(rows[0]["likelihood"]) == 1.0
    assert json.loads(out.with_suffix(".json").read_text())["config"]["runs"] == 20


def test_sweep_command(tmp_path):
    out = tmp_path / "grid.csv"
    args = ["sweep", "--n", "5", "--qe-grid", "0,1", "--qn-grid", "0:1:2", "--K", "4", "--sims", "2", "--steps", "300", "--out", str(out)]
    assert main(args) == 0
    for metric in ("mean_power", "gini", "frustration", "frustration_norm"):
        assert (tmp_path / f"grid_{metric}.csv").exists()
    side = json.loads(out.with_suffix(".json").read_text())
    assert side["config"]["K"] == 4 and len(side["gini"]) == 2


def test_infer_command(tmp_path):
    net = SignedNetwork.fully_antagonistic(2)
    write_network(tmp_path / "net.json", net)
    write_powers(tmp_path / "p.csv", [1, 1])
    (tmp_path / "x.json").write_text("[[0, 1], [1, 0]]")
    out = tmp_path / "w.csv"
    args = ["infer", "--net", str(tmp_path / "net.json"), "--powers", str(tmp_path / "p.csv"), "--observed", str(tmp_path / "x.json"), "--out", str(out)]
    assert main(args) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[1] == ["0", "0", "0.01"]
    diag = json.loads(out.with_suffix(".json").read_text())
    assert all(d["converged"] for d in diag["nodes"])


def test_ingest_command(tmp_path):
    (tmp_path / "rel.csv").write_text("country_a,country_b,year,cooperation_count,conflict_count\nA,B,1940,5,2\nB,C,1940,0,1\n")
    (tmp_path / "cap.csv").write_text("country,year,capability\nA,1940,0.1899\nC,1940,0.5\n")
    args = ["ingest", "--relations", str(tmp_path / "rel.csv"), "--capabilities", str(tmp_path / "cap.csv"), "--year", "1940"]
    assert main([*args, "--out", str(tmp_path / "net.json"), "--powers-out", str(tmp_path / "p.csv")]) == 0
    net, labels = read_network(tmp_path / "net.json")
    assert labels == ["A", "B", "C"] and list(net.edges()) == [(0, 1, 1), (1, 2, -1)]
    assert (tmp_path / "p.csv").read_text().splitlines()[1:] == ["0,190,A", "1,1,B", "2,500,C"]


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 7, "gen-net": {"n": 4, "qe": 1.0, "qn": 1.0, "out": str(tmp_path / "a.json")}}))
    assert main(["--config", str(cfg), "gen-net"]) == 0
    assert read_network(tmp_path / "a.json")[0] == SignedNetwork.fully_antagonistic(4)
    assert main(["--config", str(cfg), "gen-net", "--qn", "0", "--out", str(tmp_path / "b.json")]) == 0
    assert read_network(tmp_path / "b.json")[0] == SignedNetwork.all_friends(4)


def test_input_errors_exit_two(tmp_path, capsys):
    assert main(["gen-net", "--n", "3"]) == 2
    assert main(["static-ne", "--net", str(tmp_path / "nope.json"), "--powers", "x", "--out", "y"]) == 2
    bad = tmp_path / "cfg.json"
    bad.write_text(json.dumps({"gen-net": {"bogus": 1}}))
    assert main(["--config", str(bad), "gen-net"]) == 2
    write_network(tmp_path / "net.json", TRIANGLE)
    write_powers(tmp_path / "p.csv", [1, 1])
    assert main(["static-ne", "--net", str(tmp_path / "net.json"), "--powers", str(tmp_path / "p.csv"), "--out", "y"]) == 2
    assert "error:" in capsys.readouterr().err


def test_verify_budget_exceeded_is_input_error(tmp_path):
    write_network(tmp_path / "net.json", SignedNetwork.all_friends(6))
    write_powers(tmp_path / "p.csv", [30] * 6)
    (tmp_path / "x.json").write_text(json.dumps(np.diag([30] * 6).tolist()))
    args = ["verify-ne", "--net", str(tmp_path / "net.json"), "--powers", str(tmp_path / "p.csv"), "--matrix", str(tmp_path / "x.json"), "--budget", "100"]
    assert main(args) == 2
