import json
import subprocess
import sys

import pytest

from socioclimate.cli import main
from socioclimate.serialize import read_csv_records


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--variant", "baseline")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# fingerprint: ")
    rows = read_csv_records(out)
    assert len(rows) == 401
    assert rows[0]["t"] == "1800.0" and rows[-1]["t"] == "2200.0"
    assert list(rows[0]) == ["t", "x", "C_at", "C_oc", "C_veg", "C_so", "T",
                             "P", "R_veg", "R_so", "L", "F_oc", "R_tip"]


def test_csv_and_jsonl_agree(capsys, tmp_path):
    _, csv_out, _ = run(capsys, "simulate")
    _, js_out, _ = run(capsys, "simulate", "--format", "jsonl")
    objs = [json.loads(line) for line in js_out.splitlines()]
    rows = read_csv_records(csv_out)
    assert len(objs) == 401
    for row, obj in zip(rows, objs):
        assert all(float(row[k]) == obj[k] for k in row)
    assert objs[0]["variant"] == "modified"


def test_simulate_to_file(capsys, tmp_path):
    target = tmp_path / "traj.csv"
    assert run(capsys, "simulate", "--out", str(target))[0] == 0
    assert len(read_csv_records(target.read_text())) == 401


def test_missing_emissions_file(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", "--emissions", str(tmp_path / "none.csv"))
    assert code == 2
    assert "input error" in err


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("social.kappa = -1\n")
    assert run(capsys, "simulate", "--config", str(cfg))[0] == 2


def test_numerical_failure_exit(capsys, tmp_path):
    cfg = tmp_path / "cold.cfg"
    cfg.write_text("climate.S_flux = 100\n")
    code, _, err = run(capsys, "simulate", "--config", str(cfg))
    assert code == 3 and "numerical failure" in err


def test_compare_without_tipping(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("tipping.R_max = 0\n")
    code, out, _ = run(capsys, "compare", "--config", str(cfg))
    rec = json.loads(out)
    assert code == 0
    assert rec["auc_diff"] == 0.0 and rec["tipped"] is False
    assert rec["time_to_tip"] == {"1.1": None, "1.25": None, "1.5": None}


def test_compare_reports_tipping(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("social.kappa = 0.01\ntipping.R_max = 5\n")
    code, out, _ = run(capsys, "compare", "--config", str(cfg), "--preset", "high_risk", "--d", "1.25")
    assert code == 0 and json.loads(out)["tipped"] is True


def test_compare_rejects_small_d(capsys):
    assert run(capsys, "compare", "--d", "1.0")[0] == 1
    assert run(capsys, "compare", "--d", "abc")[0] == 1


def test_sweep_outputs_and_manifest(capsys, tmp_path):
    out = tmp_path / "grid.csv"
    code, _, _ = run(capsys, "sweep", "--x", "social.kappa:0.001:0.2:3", "--y", "tipping.R_max:0:5:4",
                     "--preset", "high_risk", "--out", str(out))
    assert code == 0
    rows = read_csv_records(out.read_text())
    assert len(rows) == 12
    assert [(r["i"], r["j"]) for r in rows[:5]] == [("0", "0"), ("0", "1"), ("0", "2"), ("0", "3"), ("1", "0")]
    assert "time_to_tip_d1.25" in rows[0]
    manifest = json.loads((tmp_path / "grid.csv.manifest.json").read_text())
    assert manifest["records"] == 12
    assert manifest["x_axis"]["n"] == 3 and manifest["preset"] == "high_risk"
    assert "params_fingerprint" in manifest and "wall_time_s" in manifest


def test_sweep_usage_errors(capsys, tmp_path):
    out = str(tmp_path / "g.csv")
    assert run(capsys, "sweep", "--x", "social.kappa:0:1:3", "--y", "social.kappa:0:1:3", "--out", out)[0] == 1
    assert run(capsys, "sweep", "--x", "social.kappa:0:1", "--y", "social.beta:0:1:3", "--out", out)[0] == 1
    assert run(capsys, "sweep", "--x", "social.nope:0:1:3", "--y", "social.beta:0:1:3", "--out", out)[0] == 1


def test_sensitivity_list_params(capsys):
    code, out, _ = run(capsys, "sensitivity", "--list-params")
    names = out.split()
    assert code == 0 and "climate.S_flux" in names and "schedule.dt" not in names


def test_sensitivity_bad_fraction(capsys):
    assert run(capsys, "sensitivity", "--fraction", "0")[0] == 1


@pytest.mark.parametrize("beta,delta,temp,expected", [
    ("2.5", "1", "1.5", [(0.0, "stable"), (0.5, "unstable"), (1.0, "stable")]),
    ("0.5", "1", "1.5", [(0.0, "unstable"), (1.0, "stable")]),
    ("2.0", "0", "1.5", [(0.0, "unstable"), (1.0, "stable")]),
])
def test_equilibria(capsys, beta, delta, temp, expected):
    code, out, _ = run(capsys, "equilibria", "--beta", beta, "--delta", delta, "--temperature", temp)
    rep = json.loads(out)
    assert code == 0
    assert [(p["x"], p["stability"]) for p in rep["points"]] == expected


def test_equilibria_negative_delta(capsys):
    assert run(capsys, "equilibria", "--beta", "1", "--delta", "-1", "--temperature", "0")[0] == 1


def test_trigger(capsys):
    code, out, _ = run(capsys, "trigger", "--beta-lo", "1", "--beta-hi", "3", "--n", "3", "--tol", "0.1")
    res = json.loads(out)
    assert code == 0
    assert [r["tipped_social"] for r in res["records"]] == [True, False, False]
    assert res["monotonicity_violations"] == []
    assert 1.0 <= res["threshold"]["lo"] < res["threshold"]["hi"] <= 2.0


def test_missing_command_is_usage_error():
    proc = subprocess.run([sys.executable, "-m", "socioclimate"], capture_output=True, text=True)
    assert proc.returncode == 1
