import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from flattumor.cli import dumps, main, parse_modes


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return invoke


def test_table1_passes(run):
    r = run("table1")
    assert r.exit_code == 0
    doc = json.loads(r.output)
    assert doc["schema"] == 1
    assert doc["all_pass"]
    row = {x["rho0"]: x for x in doc["rows"]}
    assert row[1.0]["argmin_j"] == 5 and row[1.0]["mode"] == [2, 1]
    assert 2 < row[1.0]["j0"] < 3
    assert row[0.5]["argmin_j"] == 20 and row[0.5]["mode"] == [4, 2]
    assert 11 < row[0.5]["j0"] < 12


def test_table1_fails_loudly(run, monkeypatch):
    import flattumor.cli as cli

    monkeypatch.setitem(cli.REFERENCE_ROWS, 1.0, ((2, 3), 5, 90.0, 1e-3))
    r = run("table1")
    assert r.exit_code == 1


def test_spectrum_csv_round_trip(run):
    r = run("spectrum", "--rho0", "2", "--format", "csv")
    assert r.exit_code == 0
    rows = list(csv.DictReader(io.StringIO(r.output)))
    assert list(rows[0]) == ["j", "n", "m", "k1", "k2", "mu_j"]
    assert rows[0]["mu_j"] == "inf"
    finite = [x for x in rows if x["mu_j"] != "inf"]
    assert finite[0]["j"] == "1"
    best = min(finite, key=lambda x: float(x["mu_j"]))
    table = json.loads(run("table1").output)
    ref = [x for x in table["rows"] if x["rho0"] == 2.0][0]
    assert float(best["mu_j"]) == ref["mu_star"]
    assert int(best["j"]) == ref["argmin_j"]
    assert "\r" not in r.output


def test_spectrum_inf_below_j0(run):
    r = run("spectrum", "--rho0", "0.25", "--format", "csv", "--jmax", "100")
    rows = list(csv.DictReader(io.StringIO(r.output)))
    for x in rows:
        assert (x["mu_j"] == "inf") == (int(x["j"]) <= 47)


def test_spectrum_json_encodes_inf_as_string(run):
    doc = json.loads(run("spectrum", "--rho0", "1", "--jmax", "5").output)
    assert doc["rows"][0][5] == "inf"


def test_mu_star(run):
    doc = json.loads(run("mu-star", "--rho0", "1").output)
    assert doc["outputs"]["mu_star"] == pytest.approx(84.054, rel=1e-3)
    assert doc["outputs"]["mode"] == [2, 1]


def test_stationary_without_delay(run):
    doc = json.loads(run("stationary", "--rho0", "1.0", "--grid-n", "128").output)
    out = doc["outputs"]
    assert out["rho_star"] == pytest.approx(out["rho_s"], abs=1e-10)
    assert doc["inputs"]["grid_n"] == 128


def test_stationary_with_delay(run):
    doc = json.loads(run("stationary", "--sigma-tilde", str(math.tanh(1.0)), "--tau", "0.01",
                         "--grid-n", "128").output)
    assert doc["outputs"]["rho_star"] > doc["outputs"]["rho_s"]
    assert doc["outputs"]["contraction_factor"] < 1


def test_evolve_empty_is_flat(run):
    doc = json.loads(run("evolve", "--rho0", "1", "--tau", "0.01").output)
    assert doc["surface"]["flat"]
    assert doc["trajectories"] == []


def test_evolve_modes(run):
    doc = json.loads(run("evolve", "--rho0", "1", "--mu", "100", "--modes", "2,1,1;1,0,0.5,sc",
                         "--t-end", "1", "--samples", "3").output)
    cls = [t["classification"] for t in doc["trajectories"]]
    assert cls == ["unstable", "stable"]
    assert len(doc["trajectories"][0]["times"]) == 3


def test_crossover(run):
    doc = json.loads(run("crossover").output)
    assert 1.846 < doc["outputs"]["rho_bar"] < 1.848
    assert doc["outputs"]["rho_bar_4dp"] == 1.8471


def test_deterministic_files(run, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("mu-star", "--rho0", "0.5", "--out", str(a))
    run("mu-star", "--rho0", "0.5", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".tmp")] == []


def test_exit_codes(run, tmp_path):
    r = CliRunner().invoke(main, ["stationary", "--sigma-tilde", "2"])
    assert r.exit_code == 2
    r = CliRunner().invoke(main, ["mu-star", "--rho0", "-1"])
    assert r.exit_code == 2
    r = CliRunner().invoke(main, ["stationary", "--rho0", "1", "--sigma-tilde", "0.5"])
    assert r.exit_code == 2
    r = CliRunner().invoke(main, ["stationary", "--rho0", "1", "--tau", "3", "--grid-n", "128"])
    assert r.exit_code == 3
    r = CliRunner().invoke(main, ["mu-star", "--rho0", "1", "--out", str(tmp_path / "no" / "x.json")])
    assert r.exit_code == 4


def test_error_document_is_machine_readable():
    r = CliRunner().invoke(main, ["evolve", "--rho0", "1", "--modes", "-1,0,1"])
    assert r.exit_code == 2
    start = r.output.index("{")
    doc = json.loads(r.output[start:])
    assert doc["schema"] == 1 and doc["error"] == "DomainError"


def test_parse_modes():
    ms = parse_modes("1,0,0.5; 2,3,-1,ss;")
    assert [(m.mode.n, m.mode.m, m.rho0_0, m.parity) for m in ms] == [(1, 0, 0.5, "cc"), (2, 3, -1.0, "ss")]
    assert parse_modes("") == []


def test_number_formatting_round_trips():
    x = 0.1 + 0.2
    text = dumps({"x": x, "y": float("inf"), "z": float("-inf")})
    doc = json.loads(text)
    assert doc["x"] == x
    assert doc["y"] == "inf" and doc["z"] == "-inf"
