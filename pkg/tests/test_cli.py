import csv
import json
import logging

import pytest

from subordlab.analytic import exp_series, identity_series, koebe_series, save_coefficients, z_exp_series
from subordlab.cli import main

FAST_GRID = ["--theta-points", "512", "--m-points", "16"]
SMALL_CORPUS = ["--corpus", "schwarz:k=3,count=40", "--corpus", "series:envelope=0.5,count=40",
                "--circle-points", "512"]


def load(path):
    return json.loads(path.read_text())


def test_constants(capsys):
    assert main(["constants"]) == 0
    out = capsys.readouterr().out
    assert out.count("\n") >= 21 and "104.12" in out and "flagged discrepancies" in out


def test_constants_json(capsys):
    assert main(["constants", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["rows"]) == 20
    assert set(payload["rows"][0]) == {"theorem_id", "params", "computed", "paper_value", "abs_diff"}
    assert {f["theorem_id"] for f in payload["typo_flags"]} >= {"lem9b", "lem4"}


def test_constants_tight_tolerance():
    assert main(["constants", "--tol", "1e-9"]) == 2


def test_admissible_e5(capsys):
    assert main(["admissible", "--psi", "E5", "--region", "disk:c=0,0,rho=0.367879", *FAST_GRID]) == 0
    assert "admissible" in capsys.readouterr().out


def test_admissible_x6c_above_root():
    assert main(["admissible", "--psi", "X6c", "--beta", "104.2", "--region", "expdisk", *FAST_GRID]) == 0


def test_admissible_x6c_at_100(tmp_path):
    # the true minimum stays positive at beta = 100; only the analytic proof needs the larger bound
    out = tmp_path / "r.json"
    code = main(["admissible", "--psi", "X6c", "--beta", "100", "--region", "expdisk", *FAST_GRID, "--out", str(out)])
    rep = load(out)
    assert code == 0 and rep["results"]["min_margin"] > 2.5


def test_admissible_negative(tmp_path):
    out = tmp_path / "r.json"
    # E4 on |w - 1| < 2 has margin m - 2, negative at m = 1
    assert main(["admissible", "--psi", "E4", "--region", "disk:c=1,0,rho=2", *FAST_GRID, "--out", str(out)]) == 1
    res = load(out)["results"]
    assert res["admissible"] is False and abs(res["min_margin"] + 1) < 1e-12


def test_admissible_theorem_defaults(tmp_path):
    out = tmp_path / "r.json"
    assert main(["admissible", "--theorem", "lem5a", "--branch", "folded", *FAST_GRID, "--out", str(out)]) == 0
    rep = load(out)
    assert abs(rep["results"]["min_margin"]) < 1e-6
    assert rep["config"]["grid"]["theta_points"] == 512 and "seed" in rep["config"]


def test_admissible_trace(tmp_path):
    trace = tmp_path / "t.csv"
    assert main(["admissible", "--theorem", "lem5a", *FAST_GRID, "--trace", str(trace)]) == 0
    rows = list(csv.reader(trace.open()))
    assert rows[0][:3] == ["theta", "margin_principal", "margin_folded"] and "g_margin" in rows[0]
    assert len(rows) == 513


@pytest.mark.parametrize(
    "argv",
    [
        ["admissible", "--psi", "Q1", "--region", "expdisk"],
        ["admissible", "--psi", "X3a", "--beta", "1", "--region", "blob"],
        ["admissible", "--psi", "X3a", "--region", "expdisk"],
        ["admissible", "--psi", "X3a", "--beta", "1"],
        ["admissible", "--theorem", "lem99"],
        ["constants", "--bogus"],
        ["roots", "--eq", "B7"],
        ["roots", "--eq", "root"],
        ["check-implication", "--psi", "Q1", "--hypothesis", "expdisk"],
        ["check-implication", "--psi", "E3a", "--hypothesis", "expdisk", "--corpus", "blob:count=1"],
        ["report"],
        [],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 64


def test_roots(tmp_path):
    out = tmp_path / "r.json"
    assert main(["roots", "--eq", "lem8c", "--out", str(out)]) == 0
    res = load(out)["results"]
    assert 104.121 < res[0]["root"] < 104.123
    assert main(["roots", "--eq", "root", "--n", "2"]) == 0
    assert main(["roots", "--eq", "all"]) == 0
    assert main(["roots", "--eq", "A1", "--bracket", "50", "100"]) == 1


def test_check_implication_j4a(tmp_path):
    out = tmp_path / "r.json"
    assert main(["check-implication", "--psi", "J4a", "--beta", "2.04",
                 "--hypothesis", "moebius:a=1,b=-1,c=1,d=2,k=0.5", "--conclusion", "expdisk",
                 *SMALL_CORPUS, "--out", str(out)]) == 0
    rep = load(out)
    assert rep["results"]["violations"] == 0 and rep["config"]["seed"] == 0x5EED


def test_check_implication_x7a():
    assert main(["check-implication", "--psi", "X7a", "--beta", "22.81", "--hypothesis", "expdisk",
                 *SMALL_CORPUS]) == 0


def test_check_implication_ignores_unused_beta(caplog):
    with caplog.at_level(logging.WARNING):
        assert main(["check-implication", "--psi", "E3a", "--beta", "1", "--hypothesis", "disk:c=1,0,rho=0.3678",
                     *SMALL_CORPUS]) == 0
    assert "ignored" in caplog.text


def test_check_implication_violation(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["check-implication", "--psi", "J1", "--n", "0", "--beta", "0.05", "--hypothesis",
                 "disk:c=1,0,rho=1", *SMALL_CORPUS, "--out", str(out)])
    assert code == 1
    rep = load(out)
    assert rep["results"]["violations"] > 0 and rep["results"]["details"][0]["witness"]["margin"] >= 0


def _write(tmp_path, name, series):
    path = tmp_path / name
    save_coefficients(series, path)
    return str(path)


def test_membership(tmp_path):
    assert main(["membership", "--coeffs", _write(tmp_path, "id.json", identity_series())]) == 0
    assert main(["membership", "--coeffs", _write(tmp_path, "k.json", koebe_series(64))]) == 1
    assert main(["membership", "--coeffs", _write(tmp_path, "ze.json", z_exp_series(40, 0.5))]) == 0


def test_membership_data_errors(tmp_path):
    assert main(["membership", "--coeffs", _write(tmp_path, "e.json", exp_series())]) == 65
    bad = tmp_path / "bad.json"
    bad.write_text("[[0, 0], [1")
    assert main(["membership", "--coeffs", str(bad)]) == 65
    assert main(["membership", "--coeffs", str(tmp_path / "missing.json")]) == 65


def _payload(path):
    rep = load(path)
    rep.pop("wall_time")
    return rep


def test_determinism(tmp_path):
    out = tmp_path / "a.json"
    argv = ["check-implication", "--psi", "J1", "--n", "1", "--beta", "1", "--hypothesis", "disk:c=1,0,rho=1",
            *SMALL_CORPUS, "--seed", "7", "--out", str(out)]
    main(argv)
    first = _payload(out)
    main(argv)
    assert _payload(out) == first
    assert first["results"]["hypothesis_holders"] > 0 and first["version"]


def test_seed_env_and_override(tmp_path, monkeypatch):
    argv = ["check-implication", "--psi", "X3b", "--beta", "3.0862", "--hypothesis", "expdisk", *SMALL_CORPUS]
    monkeypatch.setenv("SUBORDLAB_SEED", "0x10")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main([*argv, "--out", str(a)])
    main([*argv, "--seed", "5", "--out", str(b)])
    assert load(a)["config"]["seed"] == 16
    assert load(b)["config"]["seed"] == 5
    monkeypatch.setenv("SUBORDLAB_SEED", "nope")
    assert main(argv) == 64


def test_report(tmp_path):
    out = tmp_path / "report.json"
    assert main(["report", "--out", str(out), "--theta-points", "256", "--m-points", "8"]) == 0
    rep = load(out)["results"]
    assert len(rep["constants"]) == 20 and len(rep["theorems"]) == 38
    assert set(rep["examples"]) == {"E1", "E2", "E3a", "E3b", "E3c", "E4", "E5"}
