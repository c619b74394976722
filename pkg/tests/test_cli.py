import json
import subprocess
import sys

import pytest

from chical import vertex
from chical.cli import main, run_command
from chical.superjet import Kind

REPORT_KEYS = {"argv", "checks", "command", "inputs", "results", "seed", "timing"}


def test_nprod_text_and_report():
    code, text, report = run_command(["nprod", "p(1,0)", "0", "x(1,0)"])
    assert (code, text) == (0, "1\n")
    assert set(report) == REPORT_KEYS
    assert report["results"] == {"nprod": "1"}


def test_wick_route_agrees():
    args = ["x(1,0)^2", "-1", "p(1,0)"]
    assert run_command(["nprod", *args])[1] == run_command(["nprod", *args, "--wick"])[1]


def test_verify_is_deterministic():
    argv = ["verify", "--suite", "skew", "--seed", "7", "--cases", "30"]
    first, second = run_command(argv), run_command(argv)
    assert first[0] == 0
    assert first[1] == second[1] == "skew (30 cases): pass\n"
    assert first[2]["seed"] == 7
    assert first[2]["checks"] == second[2]["checks"]


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("CHICAL_SEED", "13")
    _, _, report = run_command(["verify", "--suite", "anomaly", "--cases", "3"])
    assert report["seed"] == 13


def test_parse_error_exit_code(capsys):
    assert main(["nprod", "x(1", "0", "p(1,0)"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: expected ')'")
    assert "^" in err


def test_usage_errors(capsys):
    assert main(["check", "skew", "p(1,0)"]) == 2
    assert main(["no-such-command"]) == 2
    capsys.readouterr()


def test_failing_check_exit_code(monkeypatch, capsys):
    monkeypatch.setitem(vertex.ANNIHILATION_SIGN, Kind.X, -vertex.ANNIHILATION_SIGN[Kind.X])
    vertex.clear_caches()
    try:
        assert main(["check", "skew", "x(1,0)", "p(1,0)"]) == 1
        assert capsys.readouterr().out.startswith("skew: fail")
    finally:
        monkeypatch.undo()
        vertex.clear_caches()


def test_report_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["--report", str(path), "check", "skew", "p(1,0)", "x(1,0)"]) == 0
    capsys.readouterr()
    data = json.loads(path.read_text())
    assert set(data) == REPORT_KEYS
    assert data["command"] == "check"
    assert data["checks"] == [{"name": "skew", "status": "pass"}]


def test_connection_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.conn"
    bad.write_text("N 2\nxi[1] = d(1)\n")
    assert main(["curvature", "--connection", str(bad)]) == 2
    assert main(["curvature", "--connection", str(tmp_path / "missing.conn")]) == 2
    capsys.readouterr()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "chical.cli", "contraction", "p(1,1)", "x(1,1)"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "-2*(z1-z2)^-3\n"
