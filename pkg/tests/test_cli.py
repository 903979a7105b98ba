import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from baire_games.cli import main
from baire_games.serialize import parse_tree

HERE = Path(__file__).parent
FIX = HERE / "fixtures"
GOLDEN = HERE / "golden"

GOLDEN_PLAYS = {
    "play_ex63_random.txt": ["play", "--cs", "ex63", "--payoff", "full_omega.tree", "--horizon", "3",
                             "--I", "random:1", "--II", "random:1"],
    "play_ex61_cover.txt": ["play", "--cs", "ex61", "--payoff", "branch0.tree", "--I", "random:1",
                            "--II", "from-cover:cover61", "--horizon", "4"],
    "play_witness.json": ["play", "--cs", "ex63", "--witness-payoff", "pairs.tree", "--move-len-cap", "1",
                          "--I", "random:3", "--II", "random:3", "--json"],
}


@pytest.fixture
def in_fixtures(monkeypatch):
    monkeypatch.chdir(FIX)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(GOLDEN_PLAYS))
def test_golden_transcripts(name, in_fixtures, capsys):
    code, out, _ = run(GOLDEN_PLAYS[name], capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_cover_play_is_won_by_ii():
    text = (GOLDEN / "play_ex61_cover.txt").read_text()
    assert text.splitlines()[-1].startswith("verdict: II_wins_at(")


@pytest.mark.parametrize("tree,summary", [("branch0.tree", "kernel_states=0 pieces=1 iterations=1"),
                                          ("full_omega.tree", "kernel_states=1 pieces=0 iterations=1")])
def test_decompose(tree, summary, tmp_path, capsys):
    code, out, _ = run(["decompose", str(FIX / tree), "--out", str(tmp_path)], capsys)
    assert code == 0 and out.strip() == summary
    trace = json.loads((tmp_path / "trace.json").read_text())
    assert trace["iterations"] == 1
    assert parse_tree((tmp_path / "kernel.tree").read_text()).is_empty == (tree == "branch0.tree")
    assert len(list(tmp_path.glob("piece_*.tree"))) == len(trace["pieces"])


def test_decompose_errors(tmp_path, capsys):
    bad = tmp_path / "bad.tree"
    bad.write_text("alphabet omega\nstart 0\nedge 0 sett{0} 0\n")
    code, _, err = run(["decompose", str(bad), "--out", str(tmp_path / "o")], capsys)
    assert code == 2 and "sett{0}" in err and "line 3, column 8" in err
    code, _, _ = run(["decompose", str(tmp_path / "missing.tree"), "--out", str(tmp_path)], capsys)
    assert code == 3
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, _ = run(["decompose", str(FIX / "branch0.tree"), "--out", str(blocker)], capsys)
    assert code == 3


@pytest.mark.parametrize("argv", [["validate-cs", "ex62", "--max-len", "4", "--letter-cap", "3", "--cond-limit", "16"],
                                  ["validate-cs", "ex63", "--max-len", "4", "--letter-cap", "6", "--cond-limit", "8"],
                                  ["validate-cs", "ex61", "--threads", "2"]])
def test_validate_cs_passes(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0 and out.splitlines()[-1] == "ok"


TABLE = {"alphabet": "finite 2", "pairs": [[[0], 0, True], [[0, 0], 0, False], [[1], 1, True], [[1, 1], 1, True],
                                            [[1], 0, False], [[0], 1, False]], "ranks": {"0": 0, "1": 0}}


def test_validate_cs_broken_table(tmp_path, capsys):
    path = tmp_path / "table.json"
    path.write_text(json.dumps(TABLE))
    code, out, _ = run(["validate-cs", str(path), "--max-len", "2", "--letter-cap", "2"], capsys)
    assert code == 1
    first = next(line for line in out.splitlines() if line.startswith("violation"))
    assert "extension" in first and "(0,)" in first
    code, _, _ = run(["validate-cs", str(path), "--exact"], capsys)
    assert code == 2


def test_validate_cs_json(capsys):
    code, out, _ = run(["--json", "validate-cs", "ex63", "--max-len", "3"], capsys)
    assert code == 0 and json.loads(out)["violations"] == []


def test_check_prints_certificates(capsys):
    code, out, _ = run(["check", str(FIX / "kary4.tree"), "--cs", "ex63"], capsys)
    data = json.loads(out)
    assert code == 0 and data["finitely_branching"] and data["nowhere_dense"]["certified"]
    code, out, _ = run(["check", str(FIX / "full_omega.tree"), "--cs", "ex63"], capsys)
    data = json.loads(out)
    assert code == 1 and data["superperfect"] and data["nowhere_dense"]["witness"] is None


def test_export_dot(tmp_path, capsys):
    code, out, _ = run(["export-dot", str(FIX / "two_branch.tree")], capsys)
    assert code == 0 and out == (GOLDEN / "two_branch.dot").read_text()
    target = tmp_path / "t.dot"
    assert main(["export-dot", str(FIX / "two_branch.tree"), "--out", str(target)]) == 0
    assert target.read_text() == out


def test_solve(in_fixtures, capsys):
    code, out, _ = run(["solve", "--cs", "ex63", "--payoff", "kary4.tree", "--letter-cap", "4",
                        "--cond-limit", "6", "--horizon", "2"], capsys)
    assert code == 0 and "winner=II" in out
    code, out, _ = run(["--json", "solve", "--base", "--payoff", "branch0.tree", "--horizon", "2",
                        "--letter-cap", "1"], capsys)
    assert code == 0 and json.loads(out)["winner"] == "II"


def test_solver_budget_exit_code(in_fixtures, capsys, monkeypatch):
    monkeypatch.setenv("BAIRE_GAMES_NODE_BUDGET", "3")
    code, _, err = run(["solve", "--cs", "ex62", "--payoff", "full_omega.tree"], capsys)
    assert code == 4 and "node budget" in err


def test_bperfect_strategy_and_fault(in_fixtures, capsys):
    code, out, _ = run(["play", "--cs", "ex63", "--payoff", "full_omega.tree", "--letter-cap", "9",
                        "--I", "from-bperfect:bperfect_ex63.json", "--II", "constant:4"], capsys)
    assert code == 0 and out.endswith("verdict: I_alive_at_horizon\n")
    code, _, err = run(["play", "--cs", "ex63", "--payoff", "full_omega.tree", "--letter-cap", "3",
                        "--I", "from-bperfect:bperfect_ex63.json", "--II", "constant:4"], capsys)
    assert code == 4 and "density" in err


def test_bad_strategy_specs(in_fixtures, capsys):
    code, _, err = run(["play", "--cs", "ex63", "--payoff", "full_omega.tree", "--I", "nope"], capsys)
    assert code == 2 and "unknown strategy" in err
    code, _, err = run(["play", "--cs", "ex64", "--payoff", "full_omega.tree"], capsys)
    assert code == 2 and "unknown condition set" in err
    code, _, _ = run(["play", "--cs", "ex63", "--payoff", "pairs.tree"], capsys)
    assert code == 2


def test_repl_plays_against_human(in_fixtures, capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("5\nbogus\n4\n"))
    code, out, _ = run(["play", "--cs", "ex63", "--payoff", "full_omega.tree", "--horizon", "2",
                        "--I", "moves:0;9", "--repl", "--letter-cap", "9"], capsys)
    assert code == 0
    assert "[II] round 1, play so far: 0" in out and "condition payloads, e.g. 0, 1, 2" in out
    assert "could not read that move" in out
    assert out.endswith("verdict: I_alive_at_horizon\n")


def test_repl_input_ends(in_fixtures, capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(""))
    code, _, err = run(["repl", "--cs", "ex63", "--payoff", "full_omega.tree"], capsys)
    assert code == 2 and "input ended" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "baire_games", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "decompose" in out.stdout
