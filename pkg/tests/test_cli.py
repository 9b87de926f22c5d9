import csv
import math
import subprocess
import sys

import pytest

from dagpart.cli import run_cli
from dagpart.io import parse_graph, read_partition

import oracles

DIAMOND = "4 4\n1 0 2 2 1 3 2\n1 0 1 4 1\n1 0 1 4 3\n1 0 0\n"


@pytest.fixture
def diamond_file(tmp_path):
    path = tmp_path / "diamond.g"
    path.write_text(DIAMOND)
    return path


def test_partition_then_evaluate(diamond_file, tmp_path, capsys):
    out = tmp_path / "out.p"
    assert run_cli(["partition", "--graph", str(diamond_file), "--k", "2", "--mode", "multi", "--seed", "1", "--output", str(out)]) == 0
    blocks = read_partition(out, 4)
    assert set(blocks) <= {0, 1}
    capsys.readouterr()
    assert run_cli(["evaluate", "--graph", str(diamond_file), "--partition", str(out)]) == 0
    text = capsys.readouterr().out
    assert "feasible true" in text
    assert "cut 3" in text


def test_evaluate_cyclic_quotient(diamond_file, tmp_path, capsys):
    p = tmp_path / "bad.p"
    p.write_text("0\n1\n1\n0\n")
    assert run_cli(["evaluate", "--graph", str(diamond_file), "--partition", str(p)]) != 0
    assert "quotient_acyclic false" in capsys.readouterr().out


@pytest.mark.parametrize("mode", ["single", "multi", "evo"])
def test_modes_write_feasible_files(tmp_path, mode):
    g = tmp_path / "g.g"
    assert run_cli(["gen", "--nodes", "80", "--layers", "8", "--density", "0.2", "--seed", "3", "--output", str(g)]) == 0
    out = tmp_path / "p.txt"
    args = ["partition", "--graph", str(g), "--k", "4", "--mode", mode, "--output", str(out)]
    if mode == "evo":
        args += ["--generations", "3", "--population", "3", "--repetitions", "1"]
    assert run_cli(args) == 0
    assert run_cli(["evaluate", "--graph", str(g), "--partition", str(out), "--k", "4"]) == 0


def test_sweep(tmp_path):
    g = tmp_path / "g.g"
    run_cli(["gen", "--nodes", "64", "--layers", "6", "--density", "0.2", "--output", str(g)])
    out = tmp_path / "p.txt"
    assert run_cli(["partition", "--graph", str(g), "--sweep", "--repetitions", "1", "--output", str(out)]) == 0
    for k in (2, 4, 8, 16, 32):
        blocks = read_partition(tmp_path / f"p.k{k}.txt", 64)
        assert max(blocks) < k


def test_evo_determinism(tmp_path):
    g = tmp_path / "g.g"
    run_cli(["gen", "--nodes", "120", "--layers", "10", "--density", "0.15", "--seed", "2", "--output", str(g)])
    outs = []
    for run in range(2):
        p, log = tmp_path / f"p{run}", tmp_path / f"l{run}.csv"
        args = ["partition", "--graph", str(g), "--k", "4", "--mode", "evo", "--islands", "1", "--seed", "7",
                "--generations", "6", "--population", "4", "--output", str(p), "--convergence-log", str(log)]
        assert run_cli(args) == 0
        outs.append((p.read_bytes(), log.read_bytes()))
    assert outs[0] == outs[1]


def test_report_two_instances(tmp_path):
    log = tmp_path / "log.csv"
    log.write_text(
        "t_seconds,cut,instance,seed,island\n"
        "0.0,4,a,1,0\n0.5,1,a,1,0\n0.0,9,b,1,0\n0.7,16,b,1,0\n"
    )
    results = tmp_path / "res.csv"
    results.write_text("algorithm,instance,cut\nevo,2mm0,930\nml,2mm0,9089\n")
    sg, ratio = tmp_path / "sg.csv", tmp_path / "ratio.csv"
    assert run_cli(["report", "--log", str(log), "--results", str(results), "--sg-output", str(sg), "--ratio-output", str(ratio)]) == 0
    rows = list(csv.reader(sg.open()))
    assert rows[0] == ["t_n", "geo_mean_cut"]
    expected = oracles.geo_curve({"a": [(0.0, 4), (0.5, 1)], "b": [(0.0, 9), (0.7, 9)]})
    got = [(float(t), float(c)) for t, c in rows[1:]]
    assert len(got) == len(expected)
    for (t1, c1), (t2, c2) in zip(got, expected):
        assert t1 == t2 and math.isclose(c1, c2, rel_tol=1e-9)
    rows = list(csv.reader(ratio.open()))
    assert rows[0] == ["algorithm", "rank", "ratio"]
    assert rows[1] == ["evo", "1", "1.0"]
    assert rows[2][:2] == ["ml", "1"] and math.isclose(float(rows[2][2]), 930 / 9089)


def test_bad_graph_reports_line(tmp_path, capsys):
    g = tmp_path / "bad.g"
    g.write_text("2 1\n1 0 1 5 1\n1 0 0\n")
    assert run_cli(["partition", "--graph", str(g), "--k", "2", "--output", str(tmp_path / "p")]) != 0
    assert "line 2" in capsys.readouterr().err


def test_console_script(tmp_path, diamond_file):
    out = tmp_path / "p"
    proc = subprocess.run(
        [sys.executable, "-m", "dagpart.cli", "partition", "--graph", str(diamond_file), "--k", "2", "--output", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert oracles.cut(parse_graph(diamond_file), read_partition(out)) == 3
