import json

import pytest

from towerlab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_orbits_json(capsys):
    code, out, _ = run_cli(capsys, "orbits", "--d", "6", "--q", "5")
    assert code == 0
    report = json.loads(out)
    assert len(report["orbits"]) == 4
    assert report["higher_selfdual_count"] == 2


def test_orbits_deterministic(capsys):
    _, out1, _ = run_cli(capsys, "orbits", "--d", "10", "--q", "3")
    _, out2, _ = run_cli(capsys, "orbits", "--d", "10", "--q", "3")
    assert out1 == out2


def test_la_selftest(capsys):
    code, out, _ = run_cli(capsys, "la", "selftest", "--trials", "5", "--seed", "1")
    assert code == 0
    report = json.loads(out)
    assert len(report["records"]) == 5
    assert all(r["divides"] for r in report["records"])


def test_twist_rank(capsys):
    code, out, _ = run_cli(capsys, "twist-rank", "--p", "3", "--ap", "0",
                           "--base", "f=-1,1", "--n", "1")
    assert code == 0
    assert json.loads(out)["rank"] == 2


def test_zeta(capsys):
    code, out, _ = run_cli(capsys, "zeta", "--p", "3", "--f", "0,-1,0,1")
    assert code == 0
    assert json.loads(out)["numerator"] == "1,0,3"


def test_lfun_null_case(capsys):
    code, out, _ = run_cli(capsys, "lfun", "--q", "5", "--model", "a2=4,4;a4=0,1;a6=0")
    assert code == 0
    report = json.loads(out)
    assert report["coeffs"] == "1" and report["D"] == 0 and report["rank"] == 0
    assert report["conductor_degree"] == 4


def test_shioda(capsys):
    code, out, _ = run_cli(capsys, "shioda", "--p", "5", "--poly", "y^2+x^4+x^3+u")
    assert code == 0
    report = json.loads(out)
    assert report["delta"] == 2 and report["passes"]


def test_bounds(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--D", "6", "--q", "5")
    assert code == 0
    assert json.loads(out)["brumer_main_term"] == 2.6947


def test_precondition_exit_code(capsys):
    code, _, err = run_cli(capsys, "zeta", "--p", "5", "--f", "1,2,1")
    assert code == 2
    assert "precondition" in err


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("TOWERLAB_BUDGET", "2")
    code, _, err = run_cli(capsys, "zeta", "--p", "3", "--f", "0,-1,0,1")
    assert code == 3
    assert "budget" in err


def test_empty_profile_usage_error(capsys):
    code, _, err = run_cli(capsys, "verify-all", "--profile", "")
    assert code == 2


def test_config_file_defaults(capsys, tmp_path):
    cfg = tmp_path / "tl.cfg"
    cfg.write_text("format=text\n")
    code, out, _ = run_cli(capsys, "orbits", "--d", "6", "--config", str(cfg), "--q", "5")
    # config supplies the output format when the flag is absent
    assert code == 0
    assert out.startswith("higher_selfdual_count")
    code, out, _ = run_cli(capsys, "orbits", "--d", "6", "--config", str(cfg), "--q", "5",
                           "--format", "json")
    # the command-line flag wins over the config value
    assert json.loads(out)["parameters"]["q"] == 5


def test_csv_projection(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--D", "6", "--q", "5", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "key,value"
    assert any(line.startswith("geometric,6") for line in out.splitlines())


def test_output_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "bounds", "--D", "6", "--q", "5", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["geometric"] == 6
