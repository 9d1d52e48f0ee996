# tests/test_cli.py
"""
Command line:
- check exit codes (0 passed, 1 violated, 2 error)
- value on a game file, gen writing a file that value can read
- verify and config subcommands
- JSON output is byte-identical across runs
"""

import json

from elsctl.cli import main

SMALL = ["--n", "3", "--trials", "10", "--seed", "1"]


def test_check_exit_codes(capsys) -> None:
    assert main(["check", "shapley", "CU", *SMALL]) == 0
    assert "verdict=passed_sample" in capsys.readouterr().out

    assert main(["check", "ed", "AC", *SMALL]) == 1
    out = capsys.readouterr().out
    assert "verdict=violated" in out and "witness: trial" in out

    assert main(["check", "propdiv", "CDO", "--n", "3", "--trials", "30", "--seed", "1"]) == 1


def test_check_json_is_deterministic(capsys) -> None:
    args = ["check", "mix:1/2", "CU", *SMALL, "--format", "json"]
    assert main(args) == 1
    first = capsys.readouterr().out
    assert main(args) == 1
    assert capsys.readouterr().out == first
    report = json.loads(first)
    assert report["verdict"] == "violated"
    assert report["witness"]["game"]["n"] == 3


def test_errors_exit_2(capsys) -> None:
    assert main(["check", "nosuchrule", "E", *SMALL]) == 2
    assert "Error running check" in capsys.readouterr().err
    assert main(["check", "shapley", "XYZ", *SMALL]) == 2
    assert main(["value", "does-not-exist.json", "shapley"]) == 2


def test_value(tmp_path, capsys) -> None:
    game = tmp_path / "u12.json"
    game.write_text('{"version":1,"n":3,"default":0,"worths":{"1,2":1,"1,2,3":1}}')
    assert main(["value", str(game), "shapley"]) == 0
    out = capsys.readouterr().out
    assert "player 1: 0.5" in out and "player 3: 0.0" in out

    assert main(["value", str(game), "shapley", "--rational", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["allocation"] == ["1/2", "1/2", "0"]
    assert data["total"] == "1"


def test_value_rejects_bad_game(tmp_path, capsys) -> None:
    game = tmp_path / "bad.json"
    game.write_text('{"n":2,"worths":{"":3,"1":0,"2":0,"1,2":1}}')
    assert main(["value", str(game), "ed"]) == 2
    assert "empty coalition" in capsys.readouterr().err


def test_gen_then_value(tmp_path, capsys) -> None:
    out = tmp_path / "g.json"
    assert main(["gen", "two_active", "--n", "4", "--seed", "3", "--param", "i=2", "--param", "j=3",
                 "--out", str(out)]) == 0
    assert "Wrote two_active game (n=4)" in capsys.readouterr().out

    assert main(["value", str(out), "cis", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["allocation"]) == 4

    assert main(["gen", "uniform", "--n", "3", "--param", "oops"]) == 2


def test_gen_to_stdout_is_deterministic(capsys) -> None:
    assert main(["gen", "uniform", "--n", "3", "--seed", "5", "--rational"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "uniform", "--n", "3", "--seed", "5", "--rational"]) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)["n"] == 3


def test_verify(capsys) -> None:
    assert main(["verify", "t2", "--n", "3", "--trials", "5"]) == 0
    assert "Suite t2: confirmed_sample" in capsys.readouterr().out

    assert main(["verify", "t4", "--n", "3", "--trials", "4", "--format", "json"]) == 0
    suites = json.loads(capsys.readouterr().out)
    assert suites[0]["theorem"] == "t4" and suites[0]["overall"] == "confirmed_sample"


def test_config_set_get(capsys) -> None:
    assert main(["config", "set", "trials", "7"]) == 0
    assert main(["config", "get", "trials"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "trials = 7"
    assert main(["config", "get", "colour"]) == 2
    assert main(["config", "set", "workers", "lots"]) == 2
