import csv
import json

import numpy as np
import pytest

from superfock import cli
from superfock.fock import ConfigError


def run(tmp_path, *args):
    return cli.main([*args, "--out", str(tmp_path)])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_run_config_json(tmp_path):
    cfg = cli.RunConfig.from_json('{"cutoff": 10, "couplings": [1, 0.5]}')
    assert cfg.cutoff == 10 and cfg.couplings == (1.0, 0.5)
    with pytest.raises(ConfigError):
        cli.RunConfig.from_json('{"cutof": 10}')
    with pytest.raises(ConfigError):
        cli.RunConfig.from_json("[1, 2]")
    with pytest.raises(ConfigError):
        cli.RunConfig(cutoff=2, margin=4)
    with pytest.raises(ConfigError):
        cli.RunConfig(betas=(1.0, -1.0))


def test_usage_errors(tmp_path, capsys):
    assert run(tmp_path, "check", "--cutoff", "2", "--margin", "4") == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"unknown": 1}')
    assert run(tmp_path, "wz", "--config", str(bad)) == 2
    bad.write_text("{not json")
    assert run(tmp_path, "wz", "--config", str(bad)) == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["frobnicate"])
    assert e.value.code == 2


def test_check_passes_and_tampered_tolerance_fails(tmp_path, capsys):
    assert run(tmp_path, "check") == 0
    report = json.loads((tmp_path / "check_report.json").read_text())
    assert report["passed"] and report["n_failed"] == 0
    assert all({"name", "defect", "tol", "passed"} <= set(c) for c in report["checks"])
    assert run(tmp_path, "check", "--tol", "1e-16") == 1
    report = json.loads((tmp_path / "check_report.json").read_text())
    assert report["n_failed"] > 0
    assert "FAIL" in capsys.readouterr().out


def test_evolve(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"s_values": [float(np.pi / 2)]}))
    assert cli.main(["evolve", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "transitions.csv")
    assert list(rows[0]) == ["flow", "s", "from_state", "to_state", "probability"]
    hit = [r for r in rows if r["flow"] == "Ia" and r["from_state"] == "|0;1>"]
    assert len(hit) == 1 and hit[0]["to_state"] == "|1;0>" and float(hit[0]["probability"]) == 1
    vac = [r for r in rows if r["flow"] == "III" and r["from_state"] == "|0,0;0>"]
    assert [(r["to_state"], float(r["probability"])) for r in vac] == [("|0,0;0>", 1.0)]
    sums = {}
    for r in rows:
        key = (r["flow"], r["s"], r["from_state"])
        sums[key] = sums.get(key, 0.0) + float(r["probability"])
    assert max(abs(v - 1) for v in sums.values()) < 1e-10


def test_entangle_tables(tmp_path):
    assert run(tmp_path, "entangle") == 0
    surface = read_csv(tmp_path / "entanglement_surface.csv")
    assert list(surface[0]) == ["kbar", "phi", "E"]
    assert sorted({float(r["kbar"]) for r in surface}) == [0, 0.25, 0.5, 0.75, 1]
    assert len(surface) == 5 * 257
    assert max(float(r["E"]) for r in surface) == pytest.approx(2 * np.log(2), abs=1e-10)
    per = read_csv(tmp_path / "entanglement_per_fermion.csv")
    assert list(per[0]) == ["kbar", "phi", "E1", "E2"]
    assert max(float(r["E1"]) for r in per) <= np.log(2) + 1e-11
    # 12 significant digits
    assert surface[1]["phi"] == f"{np.pi / 256:.12g}"


def test_entangle_json_format(tmp_path):
    assert run(tmp_path, "entangle", "--format", "json") == 0
    data = json.loads((tmp_path / "entanglement_surface.json").read_text())
    assert set(data[0]) == {"kbar", "phi", "E"}


def test_entangle_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["entangle", "--out", str(a)]) == 0
    assert cli.main(["entangle", "--out", str(b)]) == 0
    for name in ("entanglement_surface.csv", "entanglement_per_fermion.csv", "entanglement_extrema.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_thermal_command(tmp_path):
    assert run(tmp_path, "thermal") == 0
    rows = read_csv(tmp_path / "thermal.csv")
    assert list(rows[0]) == ["beta", "s", "omega_nf", "omega_nb", "omega_nf_evolved", "drift_ib"]
    row = [r for r in rows if np.isclose(float(r["beta"]), np.log(2)) and float(r["s"]) == 1][0]
    assert float(row["drift_ib"]) == pytest.approx(4 / 3, abs=1e-9)


def test_susino_command(tmp_path):
    assert run(tmp_path, "susino") == 0
    rows = read_csv(tmp_path / "susino_phases.csv")
    gammas = {round(float(r["gamma"])) for r in rows}
    assert gammas == {-2, -1, 0, 1, 2}


def test_wz_command(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"g": 0.0, "wz_cutoff": 12}')
    assert cli.main(["wz", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    levels = [float(r["level"]) for r in read_csv(tmp_path / "wz_spectrum.csv")]
    assert min(levels) > -1e-12
    assert np.allclose(levels, np.round(levels))
    report = json.loads((tmp_path / "wz.json").read_text())
    assert report["closed_form"]["discrepancy"] < 1e-12
    assert report["convergence"]["cutoffs"] == [12, 16]
