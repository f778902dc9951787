import numpy as np

from switchgraph.cli import main
from switchgraph.graphs import dump_graph
from switchgraph.verify import random_connected_graph

CONFIG = """
graph = file:{graph}
algos = scs-b
ensembles = 1
T = 20
switch_every = 10
labels = random
seed = 3
out = {out}
"""


def write_graph(tmp_path):
    g = random_connected_graph(10, 6, np.random.default_rng(2))
    path = tmp_path / "graph.txt"
    path.write_text(dump_graph(g))
    return path


def test_sample_spine_prints_seeded_permutation(tmp_path, capsys):
    gpath = write_graph(tmp_path)
    assert main(["sample-spine", "--graph", str(gpath), "--seed", "11"]) == 0
    first = capsys.readouterr().out.strip()
    values = [int(x) for x in first.split()]
    assert sorted(values) == list(range(1, 11))
    # same seed, same spine; different seed reshuffles (whp)
    assert main(["sample-spine", "--graph", str(gpath), "--seed", "11"]) == 0
    assert capsys.readouterr().out.strip() == first
    outs = set()
    for seed in range(5):
        main(["sample-spine", "--graph", str(gpath), "--seed", str(seed)])
        outs.add(capsys.readouterr().out.strip())
    assert len(outs) > 1


def test_sample_spine_bad_inputs(tmp_path, capsys):
    missing = tmp_path / "nope.txt"
    assert main(["sample-spine", "--graph", str(missing), "--seed", "1"]) == 2
    assert "error" in capsys.readouterr().err
    bad = tmp_path / "bad.txt"
    bad.write_text("n=3\n1 9\n")
    assert main(["sample-spine", "--graph", str(bad), "--seed", "1"]) == 2
    assert "error" in capsys.readouterr().err


def test_run_writes_outputs(tmp_path, capsys):
    gpath = write_graph(tmp_path)
    out = tmp_path / "out"
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(CONFIG.format(graph=gpath, out=out))
    assert main(["run", "--config", str(cfg)]) == 0
    stdout = capsys.readouterr().out
    assert "final mistakes" in stdout
    lines = (out / "results.csv").read_text().splitlines()
    assert lines[0] == "trial,algo,ensemble,cum_mistakes,usec"
    assert len(lines) == 21
    assert (out / "meta.txt").exists()


def test_run_config_errors_exit_2(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "nope.cfg")]) == 2
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("graph = file:x\n")
    assert main(["run", "--config", str(cfg)]) == 2
    assert "missing config keys" in capsys.readouterr().err


def test_run_runtime_errors_exit_1(tmp_path, capsys):
    # config parses but the graph file is missing: a runtime failure
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(CONFIG.format(graph=tmp_path / "ghost.txt", out=tmp_path / "o"))
    assert main(["run", "--config", str(cfg)]) == 1
    assert "error" in capsys.readouterr().err


def test_verify_unknown_suite_exits_2(capsys):
    assert main(["verify", "--suite", "bogus"]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_verify_suite_reports_pass_lines(capsys):
    assert main(["verify", "--suite", "prop2"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") >= 1
    assert "FAIL" not in out


def test_bench_outputs_parseable_table(capsys):
    assert main(["bench", "--basis", "btree", "--nmin", "8", "--nmax", "16",
                 "--trials", "40"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("basis,n,median_usec")
    data = [line.split(",") for line in lines[1:]]
    assert [int(row[1]) for row in data] == [8, 16]
    assert all(float(row[2]) > 0 for row in data)


def test_bench_argument_guards(capsys):
    assert main(["bench", "--basis", "btree", "--nmin", "6", "--nmax", "8"]) == 2
    assert "powers of two" in capsys.readouterr().err
    assert main(["bench", "--basis", "full", "--nmin", "8192", "--nmax", "8192"]) == 2
    assert "allow-quadratic" in capsys.readouterr().err
