"""CLI contract (exit codes, formats, determinism) and CSV/JSON helpers."""
import json
import math

import numpy as np
import pytest

import ermakov_lab.dynamics as dyn
from ermakov_lab.cli import main
from ermakov_lab.io import dumps, envelope, fmt, read_csv, write_csv

CONST = '{"variant": "constant", "params": {"omega0": 1.0}}'
COSH = '{"variant": "hyperbolic_cosh", "params": {"epsilon0": 0.5, "tau": 1.0}}'
LOG = '{"variant": "log_amplitude", "params": {"epsilon0": 1.0, "tau": 1.0}}'


def test_fmt_round_trips():
    for x in [0.1, 1 / 3, 1e-300, -2.5e17, math.pi]:
        assert float(fmt(x)) == x
    assert fmt(np.float64(0.5)) == "0.5"
    assert fmt(float("nan")) == "nan"


def test_csv_round_trip():
    a = np.array([0.1, 0.2, 1 / 3])
    text = write_csv(["a", "b"], [a, 2 * a])
    assert text.splitlines()[0] == "a,b"
    back = read_csv(text)
    assert np.array_equal(back["a"], a) and np.array_equal(back["b"], 2 * a)


def test_envelope_is_json_clean():
    doc = envelope("k", {"x": np.float64(1.5), "ok": np.bool_(True), "bad": float("inf")},
                   {"c": np.arange(3)})
    parsed = json.loads(dumps(doc))
    assert parsed == {"kind": "k", "metadata": {"x": 1.5, "ok": True, "bad": None},
                      "data": {"c": [0, 1, 2]}}


def test_catalog_listing(capsys):
    assert main(["catalog"]) == 0
    out = capsys.readouterr().out
    block = out.split("hyperbolic_cosh\n")[1].split("\n", 4)
    assert "second Pöschl–Teller" in "\n".join(block)
    cos_block = out.split("oscillatory_cos\n")[1].split("oscillatory_sin")[0]
    assert "first Pöschl–Teller" in cos_block
    assert main(["catalog", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {r["variant"] for r in rows} >= {"exponential", "power_law", "tabulated"}


def test_simulate_constant_rows(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["simulate", "--model", CONST, "--span", f"0,{2 * math.pi!r}", "--dt", "1e-3",
                 "--out", str(out)]) == 0
    data = read_csv(out.read_text())
    assert abs(data["t"].size - 6284) <= 1
    np.testing.assert_allclose(data["wronskian_im"], 1.0, atol=1e-9)
    meta = json.loads((tmp_path / "c.csv.meta.json").read_text())
    assert meta["metadata"]["rows"] == data["t"].size
    assert "stamp" not in meta["metadata"]


def test_simulate_cosh_round_trip(tmp_path):
    out = tmp_path / "h.csv"
    assert main(["simulate", "--model", COSH, "--span", "-2,2", "--out", str(out)]) == 0
    d = read_csv(out.read_text())
    np.testing.assert_allclose(d["xi"], np.sqrt(0.5 * np.cosh(d["t"])), rtol=1e-6)


def test_simulate_domain_violation(capsys):
    assert main(["simulate", "--model", LOG, "--span", "0.5,3"]) == 1
    assert "outside" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["simulate", "--model", '{"variant": "nope"}', "--span", "0,1"],
    ["simulate", "--model", "{not json", "--span", "0,1"],
    ["simulate", "--model", "/no/such/file.json", "--span", "0,1"],
    ["simulate", "--model", CONST],
    ["simulate", "--model", CONST, "--span", "1,0"],
    ["simulate", "--model", CONST, "--span", "0,1", "--tol-rel", "-1"],
    ["simulate", "--model", CONST, "--span", "0,1", "--format", "xml"],
    ["perturb", "--model", CONST, "--span", "0,1", "--nmax", "-1"],
    ["bogus"],
])
def test_config_errors_exit_1(argv, capsys):
    assert main(argv) == 1


def test_integration_failure_exit_2(monkeypatch, capsys):
    class Failed:
        status = -1
        message = "step size too small"
        t = np.array([0.0, 0.3])

    monkeypatch.setattr(dyn, "solve_ivp", lambda *a, **k: Failed())
    assert main(["simulate", "--model", CONST, "--span", "0,1"]) == 2
    assert "reached t=0.3" in capsys.readouterr().err


def test_model_from_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(COSH)
    assert main(["simulate", "--model", str(path), "--span", "0,0.01"]) == 0
    assert capsys.readouterr().out.startswith("t,re_w,im_w")


def test_simulate_is_byte_deterministic(tmp_path):
    for k in (1, 2):
        assert main(["simulate", "--model", COSH, "--span", "-1,1", "--dt", "0.01",
                     "--out", str(tmp_path / f"r{k}.csv")]) == 0
    assert (tmp_path / "r1.csv").read_bytes() == (tmp_path / "r2.csv").read_bytes()
    assert ((tmp_path / "r1.csv.meta.json").read_bytes()
            == (tmp_path / "r2.csv.meta.json").read_bytes())


def test_stamp_goes_to_metadata_only(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["simulate", "--model", CONST, "--span", "0,0.1", "--out", str(out),
                 "--stamp"]) == 0
    assert "stamp" in json.loads((tmp_path / "s.csv.meta.json").read_text())["metadata"]
    assert "T" not in out.read_text().splitlines()[1]


def test_simulate_trajectory_and_json(tmp_path, capsys):
    assert main(["simulate", "--model", CONST, "--span", "0,1", "--dt", "0.1",
                 "--initial", "1,0", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "trajectory"
    np.testing.assert_allclose(doc["data"]["u"], np.cos(doc["data"]["t"]), atol=1e-9)


def test_simulate_tabulated(capsys):
    model = '{"variant": "tabulated", "times": [0, 1, 2], "omega_squared": [1, 1.5, 1]}'
    assert main(["simulate", "--model", model, "--span", "0,2", "--dt", "0.1"]) == 0
    d = read_csv(capsys.readouterr().out)
    np.testing.assert_allclose(d["wronskian_im"], 1.0, atol=1e-9)


def test_wavefunction_ground_state_gaussian(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["wavefunction", "--model", CONST, "--span", "0,1", "--n", "0",
                 "--out", str(out)]) == 0
    d = read_csv(out.read_text())
    assert d["q"][np.argmax(d["abs2"])] == 0.0
    np.testing.assert_allclose(d["abs2"], np.exp(-d["q"] ** 2) / math.sqrt(math.pi), atol=1e-14)


def test_wavefunction_multiple_states_json(capsys):
    assert main(["wavefunction", "--model", COSH, "--t", "0,0.5", "--n", "0,2",
                 "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    data = doc["data"]
    assert sorted(set(data["n"])) == [0, 2]
    assert sorted(set(data["t"])) == [0.0, 0.5]
    assert doc["metadata"]["n"] == [0, 2]


def test_perturb_report(capsys):
    model = '{"variant": "hyperbolic_cosh", "params": {"epsilon0": 0.1, "tau": 20}}'
    assert main(["perturb", "--model", model, "--span", "-20,20", "--dt", "0.02",
                 "--nmax", "3"]) == 0
    its = json.loads(capsys.readouterr().out)["data"]["iterations"]
    assert its[1]["max_rel_err"] < its[0]["max_rel_err"]


def test_perturb_turning_point_exit_0(capsys):
    model = '{"variant": "exponential", "params": {"epsilon0": 2, "lam": 1}}'
    assert main(["perturb", "--model", model, "--span", "-2,1", "--nmax", "1"]) == 0
    its = json.loads(capsys.readouterr().out)["data"]["iterations"]
    assert its[0]["excluded_intervals"]


def test_perturb_csv(tmp_path):
    model = '{"variant": "hyperbolic_cosh", "params": {"epsilon0": 0.1, "tau": 20}}'
    out = tmp_path / "p.csv"
    assert main(["perturb", "--model", model, "--span", "-20,20", "--nmax", "1",
                 "--format", "csv", "--out", str(out)]) == 0
    assert out.read_text().startswith("n,max_rel_err")
    assert (tmp_path / "p.csv.meta.json").exists()


def test_validate_scope(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["validate", "frequency_models", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    checks = {r["check"] for r in doc["results"]}
    assert "eq28_printed_vs_pipeline: mismatch documented" in checks
    for r in doc["results"]:
        assert {"check", "model", "max_err", "tol", "pass"} <= set(r)


def test_validate_quantum_has_normalisation(capsys):
    assert main(["validate", "quantum_states"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert any(r["check"] == "wavefunction_normalisation_n0_10" for r in doc["results"])


def test_validate_failure_exit_code(monkeypatch, capsys):
    import ermakov_lab.cli as cli

    monkeypatch.setattr(cli, "run_validation", lambda scope, seed: {
        "passed": False, "results": [{"check": "x", "model": "m", "max_err": 1.0, "tol": 0.0,
                                      "pass": False}]})
    assert main(["validate"]) == 1
    assert "FAIL x" in capsys.readouterr().err
