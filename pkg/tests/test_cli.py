import json
import subprocess
import sys

import pytest

from influence.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_NO, EXIT_YES, main

from support import HERE, fixture_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_fig3_trace(capsys):
    code, out, _ = run(capsys, "simulate", fixture_path("two_step.json"))
    assert code == EXIT_YES
    assert out.splitlines() == [
        "0 | B=(0,1,1) | V=(1,1,0) | a=(skip, skip, reveal p)",
        "1 | B=(1,1,1) | V=(1,1,1) | a=(skip, hide p, skip)",
        "2 | B=(1,1,1) | V=(1,0,1) | a=(skip, skip, skip)",
        "lasso: prefix 2, cycle 1, returns to t=2",
    ]


def test_simulate_steps(capsys):
    code, out, _ = run(capsys, "simulate", fixture_path("two_step.json"), "--steps", 4)
    assert code == EXIT_YES
    assert len(out.splitlines()) == 5
    assert out.splitlines()[-1].startswith("4 | B=(1,1,1) | V=(1,0,1)")


def test_simulate_fixed_point(capsys):
    _, out, _ = run(capsys, "simulate", fixture_path("fixed_point.json"))
    assert out.splitlines()[-1] == "lasso: prefix 0, cycle 1, returns to t=0"


def test_simulate_consensus_reaches_unanimity(capsys):
    _, out, _ = run(capsys, "simulate", fixture_path("consensus2.json"))
    assert "B=(1,1)" in out.splitlines()[1]


@pytest.mark.parametrize("formula,code,text", [
    ("F (K[k] (B[i,p] & V[i,p]))", EXIT_YES, "SAT"),
    ("X B[i,p]", EXIT_YES, "SAT"),
    ("B[i,p]", EXIT_NO, "UNSAT"),
])
def test_check(capsys, formula, code, text):
    got, out, _ = run(capsys, "check", fixture_path("two_step.json"), formula)
    assert (got, out.strip()) == (code, text)


def test_check_at_time(capsys):
    got, out, _ = run(capsys, "check", fixture_path("two_step.json"), "B[i,p]", "--at", 1)
    assert (got, out.strip()) == (EXIT_YES, "SAT")


def test_check_layer_violation(capsys):
    got, _, err = run(capsys, "check", fixture_path("two_step.json"), "K[i] X B[j,p]")
    assert got == EXIT_INPUT and "position 5" in err


@pytest.mark.parametrize("formula,expected", [
    ("K[i] B[i,p]", "B[i,p]"),
    ("K[i] B[j,p]", "B[j,p] & V[j,p]"),
    ("K[i] (B[i,p] | B[j,p])", "B[i,p] | B[j,p] & V[j,p]"),
])
def test_reduce(capsys, formula, expected):
    code, out, _ = run(capsys, "reduce", formula)
    assert code == EXIT_YES and out.strip() == expected


def test_encode_matches_golden(capsys, tmp_path):
    table = tmp_path / "props.tsv"
    code, out, _ = run(capsys, "encode", fixture_path("golden_n2.json"), "--table", table)
    assert code == EXIT_YES
    assert out == (HERE / "golden" / "unanimity_n2_m1.ltl").read_text()
    assert table.read_text() == (HERE / "golden" / "unanimity_n2_m1.tsv").read_text()


def test_encode_lists_propositions_inline(capsys):
    _, out, _ = run(capsys, "encode", fixture_path("golden_n2.json"))
    assert "# propositions" in out


def test_encode_refuses_oversized(capsys):
    code, _, err = run(capsys, "encode", fixture_path("oversized.json"))
    assert code == EXIT_INPUT and "guard" in err


def test_encode_with_strategies(capsys):
    code, out, _ = run(capsys, "encode", fixture_path("dropped_edge.json"))
    assert code == EXIT_YES
    assert "X v_Ann_p" in out


def test_winning_triangle_uniform(capsys):
    code, out, err = run(capsys, "winning", fixture_path("triangle.json"), "--agent", "Ann",
                         "--uniform", "--horizon", 8)
    assert code == EXIT_YES
    rec = json.loads(out)
    assert rec["verdict"] == "yes" and len(rec["checks"]) == 2
    assert "constant strategies only" in err


def test_winning_dropped_edge(capsys):
    code, out, _ = run(capsys, "winning", fixture_path("dropped_edge.json"), "--agent", "Ann",
                       "--family", "reachable")
    assert code == EXIT_NO
    rec = json.loads(out)
    assert rec["verdict"] == "no" and rec["family"] == "reachable"
    assert "reveal p" in rec["witness"]["history"]["trace"][0].split("a=")[1].split(",")[1]


def test_dominant(capsys):
    code, out, _ = run(capsys, "dominant", fixture_path("dropped_edge.json"), "--agent", "Ann",
                       "--family", "constant")
    assert code == EXIT_YES and json.loads(out)["verdict"] == "yes"


def test_nash(capsys):
    code, out, _ = run(capsys, "nash", fixture_path("consensus2.json"), "--family", "full")
    assert code == EXIT_YES and json.loads(out)["verdict"] == "yes"


def test_budget_exit(capsys):
    code, _, err = run(capsys, "winning", fixture_path("dropped_edge.json"), "--agent", "Ann",
                       "--family", "full")
    assert code == EXIT_BUDGET and "budget" in err
    code, _, _ = run(capsys, "winning", fixture_path("dropped_edge.json"), "--agent", "Ann",
                     "--family", "reachable", "--budget", 1)
    assert code == EXIT_BUDGET


def test_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("INFLUENCE_BUDGET", "1")
    code, _, _ = run(capsys, "winning", fixture_path("dropped_edge.json"), "--agent", "Ann",
                     "--family", "reachable")
    assert code == EXIT_BUDGET


def test_unknown_agent(capsys):
    code, _, err = run(capsys, "winning", fixture_path("triangle.json"), "--agent", "Zed")
    assert code == EXIT_INPUT and "Zed" in err


def test_export_dot(capsys):
    _, out, _ = run(capsys, "export-dot", fixture_path("triangle.json"))
    assert out.count("->") == 3 and out.count(";") == 6
    _, dup, _ = run(capsys, "export-dot", fixture_path("duplicate_edges.json"))
    assert dup == out
    _, empty, _ = run(capsys, "export-dot", fixture_path("empty_network.json"))
    assert "->" not in empty and empty.count(";") == 2


@pytest.mark.parametrize("name", ["bad_reflexive.json", "bad_goal.json"])
def test_bad_files(capsys, name):
    code, _, err = run(capsys, "simulate", fixture_path(name))
    assert code == EXIT_INPUT and err.startswith("error:")


def test_malformed_json_has_location(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"agents": ["a",\n  }')
    code, _, err = run(capsys, "simulate", bad)
    assert code == EXIT_INPUT and "line 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "simulate", tmp_path / "absent.json")
    assert code == EXIT_INPUT


def test_generate_is_seeded(capsys, tmp_path):
    _, a, _ = run(capsys, "generate", "--seed", 7)
    _, b, _ = run(capsys, "generate", "--seed", 7)
    _, c, _ = run(capsys, "generate", "--seed", 8)
    assert a == b and a != c
    path = tmp_path / "g.json"
    path.write_text(a)
    assert run(capsys, "simulate", path)[0] == EXIT_YES


@pytest.mark.parametrize("argv", [
    ["simulate", "two_step.json"],
    ["winning", "dropped_edge.json", "--agent", "Ann", "--family", "reachable"],
    ["nash", "consensus2.json", "--family", "full"],
    ["encode", "golden_n2.json"],
])
def test_commands_are_deterministic(capsys, argv):
    argv = [fixture_path(a) if a.endswith(".json") else a for a in argv]
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "influence", "reduce", "K[a] B[b,p]"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "B[b,p] & V[b,p]"
