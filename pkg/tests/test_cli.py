import json
import shutil
from pathlib import Path

import pytest

from slopelab import harness
from slopelab.cli import main
from slopelab.reports import FAIL, CheckReport

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data(tmp_path):
    for p in DATA.glob("*.json"):
        shutil.copy(p, tmp_path / p.name)
    return tmp_path


def test_lat_info_A2(data, capsys):
    assert main(["lat", "info", str(data / "a2.json")]) == 0
    out = capsys.readouterr().out
    assert "rank: 2" in out
    assert "ndeg: -1/2*log(3) ≈ -0.549306" in out
    assert "semistable: true" in out


def test_lat_hn_and_aut(data, capsys):
    assert main(["lat", "hn", str(data / "a2.json")]) == 0
    assert "mode: EXACT" in capsys.readouterr().out
    assert main(["lat", "aut", str(data / "a2.json")]) == 0
    out = capsys.readouterr().out
    assert "order: 12" in out and "commutant_dim: 1" in out


def test_lat_info_unstable(tmp_path, capsys):
    p = tmp_path / "d.json"
    p.write_text('{"label": "d", "gram": [[1, 0], [0, 4]]}')
    assert main(["lat", "info", str(p)]) == 0
    out = capsys.readouterr().out
    assert "semistable: false" in out and "destabilizing: [[1, 0]]" in out


def test_git_check_counterexample(data, capsys):
    assert main(["git", "check", str(data / "counterexample.json"), "--side", "both"]) == 0
    out = capsys.readouterr().out
    assert "left: STABLE_CERTIFIED" in out and "right: STABLE_CERTIFIED" in out
    assert "both: UNSTABLE" in out and "both margin: 1/3" in out
    wit = json.loads(out.split("both witness: ")[1])
    assert set(wit) == {"F", "G"}


def test_tensor_commands(data, capsys):
    assert main(["tensor", "deg", str(data / "a2.json"), str(data / "a2.json"), "--element", "[[1, 0], [0, 0]]", "--metric", "herm"]) == 0
    out = capsys.readouterr().out
    assert "tensorial_rank: 1" in out and "degree[herm]: -log(2)" in out
    assert main(["tensor", "rho", str(data / "counterexample.json")]) == 0
    assert "rho_1: 2" in capsys.readouterr().out


def test_filt_eval(data, capsys):
    f = str(data / "flag.json")
    assert main(["filt", "eval", f, "--op", "expectation"]) == 0
    assert "expectation: 1/2" in capsys.readouterr().out
    assert main(["filt", "eval", f, "--op", "exterior", "--arg", "3"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["dim"] == 1 and obj["steps"][0]["weight"] == {"n": 3, "d": 2}
    assert main(["filt", "eval", f, "--op", "inner", "--other", f]) == 0
    assert "inner: 7/4" in capsys.readouterr().out


def test_harness_run_oracles_csv(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["harness", "run", "--suite", "oracles", "--out", str(a)]) == 0
    assert main(["harness", "run", "--suite", "oracles", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "FAIL 0" in capsys.readouterr().out


def test_harness_exit_code_on_fail(monkeypatch, capsys):
    bad = CheckReport.compare("lattice", "t", 0, 2, 1)
    assert bad.status == FAIL
    monkeypatch.setattr(harness, "run", lambda suites, cfg, jobs: [bad])
    assert main(["harness", "run", "--suite", "lattice", "--trials", "1"]) == 1
    assert "FAIL lattice t" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["lat"],
        ["harness", "run", "--suite", "nope"],
        ["harness", "run", "--entry-bound", "0"],
        ["git", "check", "missing.json"],
        ["filt", "eval", "x.json"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_malformed_file_reports_field(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"gram": [[1, 0], [0, "q"]]}')
    assert main(["lat", "info", str(p)]) == 2
    assert "gram[1][1]" in capsys.readouterr().err
    p.write_text('{"gram": [[1, 0],\n [0 1]]}')
    assert main(["lat", "info", str(p)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_filt_missing_argument(data, capsys):
    assert main(["filt", "eval", str(data / "flag.json"), "--op", "tensor"]) == 2
    assert "--other" in capsys.readouterr().err
