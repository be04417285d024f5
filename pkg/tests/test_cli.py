"""End-to-end coverage of the qsc22 command line interface."""

from __future__ import annotations

import cmath
import json
import math

from click.testing import CliRunner

from qsc22.analytic_layer import shell_pairs
from qsc22.cli import main


def _run(*args, **kwargs):
    return CliRunner().invoke(main, list(args), **kwargs)


def test_solve_liebwu_single_mode_matches_ed():
    result = _run("solve-liebwu", "--L", "2", "--u", "1", "--N", "1",
                  "--M", "0", "--I", "0", "--compare-ed")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["ok"] is True
    assert payload["E"] == -2.0
    assert payload["ed"]["sector"] == [1, 0]
    assert payload["ed"]["gap"] < 1e-8
    assert payload["residual"] < 1e-12


def test_solve_liebwu_vacuum():
    result = _run("solve-liebwu", "--L", "2", "--u", "1", "--N", "0",
                  "--M", "0")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload == {"E": 2.0, "P": 0.0, "k": [], "lambda": [],
                       "ok": True, "residual": 0.0}


def test_solve_liebwu_rejects_duplicate_modes():
    result = _run("solve-liebwu", "--L", "2", "--u", "1", "--N", "2",
                  "--M", "0", "--I", "0", "--I", "0")
    assert result.exit_code == 2
    assert "distinct" in result.stderr


def test_solve_liebwu_needs_parameters():
    result = _run("solve-liebwu", "--u", "1", "--N", "1", "--M", "0")
    assert result.exit_code == 2
    assert "--L" in result.stderr


def test_solve_liebwu_input_file(tmp_path):
    path = tmp_path / "state.json"
    path.write_text(json.dumps(
        {"L": 2, "u": 1.0, "N": 1, "M": 0, "I": [1]}), encoding="utf-8")
    result = _run("solve-liebwu", "--input", str(path))
    assert result.exit_code == 0
    assert json.loads(result.stdout)["E"] == 2.0


def test_check_qq_random_is_repeatable():
    first = _run("check-qq", "--random", "3", "--rng-seed", "11")
    second = _run("check-qq", "--random", "3", "--rng-seed", "11")
    assert first.exit_code == 0
    assert first.stdout_bytes == second.stdout_bytes
    payload = json.loads(first.stdout)
    assert payload["ok"] is True
    assert len(payload["runs"]) == 3
    assert all(run["checked"] == 49 for run in payload["runs"])


def test_check_qq_random_needs_rng_seed():
    result = _run("check-qq", "--random", "3")
    assert result.exit_code == 2


def test_gen_qsystem_round_trip(tmp_path):
    path = tmp_path / "seed.json"
    gen = _run("gen-qsystem", "--rng-seed", "5", "--out", str(path))
    assert gen.exit_code == 0
    check = _run("check-qq", "--seed", str(path))
    assert check.exit_code == 0
    payload = json.loads(check.stdout)
    assert payload["ok"] is True
    assert payload["runs"][0]["checked"] == 49
    assert payload["runs"][0]["failures"] == []


def test_check_qq_detects_corruption(tmp_path):
    full = json.loads(_run("gen-qsystem", "--rng-seed", "5", "--full").stdout)
    coeff = full["Q"]["1|1"]["terms"][0]["coeffs"][1]
    coeff[0] = str(int(coeff[0]) + 1)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(full), encoding="utf-8")
    result = _run("check-qq", "--seed", str(path))
    assert result.exit_code == 1
    payload = json.loads(result.stdout)
    assert payload["ok"] is False
    assert any("1|1" in name for name in payload["runs"][0]["failures"])


def test_check_qq_malformed_input(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json", encoding="utf-8")
    assert _run("check-qq", "--seed", str(path)).exit_code == 2
    missing = tmp_path / "absent.json"
    assert _run("check-qq", "--seed", str(missing)).exit_code == 2


def test_check_hirota_random():
    result = _run("check-hirota", "--random", "2", "--rng-seed", "3")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["ok"] is True
    assert len(payload["runs"]) == 2
    for run in payload["runs"]:
        assert run["checked"] == 20
        assert "0,0" in run["skipped"]


def test_ed_json():
    result = _run("ed", "--L", "2", "--u", "1", "--nup", "1", "--ndown", "0")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["sector"] == [1, 0]
    assert payload["eigenvalues"][0] == -1.9999999999999996
    assert payload["eigenvalues"][-1] == 1.9999999999999996


def test_ed_csv_uses_crlf():
    result = _run("ed", "--L", "2", "--u", "1", "--nup", "1", "--ndown", "0",
                  "--format", "csv")
    assert result.exit_code == 0
    assert result.stdout_bytes.startswith(b"L,u,nup,ndown,eigenvalue\r\n")
    rows = result.stdout_bytes.decode().split("\r\n")
    assert rows[1].split(",")[-1] == "-1.9999999999999996"


def test_ed_rejects_bad_sector():
    assert _run("ed", "--L", "2", "--u", "1", "--nup", "3",
                "--ndown", "0").exit_code == 2


def test_character_explicit_twists():
    result = _run("character", "--sx", "3/5,4/5", "--sy", "5/13,12/13")
    assert result.exit_code == 0
    assert result.stdout.strip() == (
        '{"ok":true,"runs":[{"hirota":true,"hodge_trivial":true,"ok":true,'
        '"qq":true,"shift_invariant":true,"sx":"3/5+4/5i","sy":"5/13+12/13i"}]}')


def test_character_rejects_degenerate_twists():
    result = _run("character", "--sx", "3/5,4/5", "--sy", "3/5,4/5")
    assert result.exit_code == 2
    assert "degenerate" in result.stderr


def test_compare_sector():
    result = _run("compare", "--L", "2", "--u", "1", "--N", "1", "--M", "0")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["ok"] is True
    assert payload["solutions"] == 2 and payload["candidates"] == 2
    assert payload["max_gap"] < 1e-8
    energies = sorted(m["E"] for m in payload["matches"])
    assert energies == [-2.0, 2.0]


def test_check_f_quick():
    result = _run("check-f", "--points", "20")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["ok"] is True
    assert payload["telescope"] < 1e-12
    assert payload["mu"] < 1e-12 and payload["omega"] < 1e-12


def test_pmu_check():
    result = _run("pmu-check")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["ok"] is True
    assert payload["max_residual"] < 1e-8
    assert payload["fit_residual"] < 1e-8
    assert payload["roots"]["x1e"][0][0] == -9.0792186463333


def test_solve_nested_from_file(tmp_path):
    yplus, yminus = shell_pairs(1.0, [0.7, -0.7])
    seed_x = 1j * cmath.exp(-0.3j)
    seed_w = cmath.exp(2.9j) / 1j
    payload = {
        "h": 1.0,
        "Mtheta": 2,
        "yplus": [[y.real, y.imag] for y in yplus],
        "yminus": [[y.real, y.imag] for y in yminus],
        "twist_x": [math.cos(0.3), math.sin(0.3)],
        "twist_y": [math.cos(0.2), -math.sin(0.2)],
        "counts": [1, 1, 1],
        "seed": {"x1e": [[seed_x.real, seed_x.imag]],
                 "u11": [[-0.6, 0.1]],
                 "x112": [[seed_w.real, seed_w.imag]]},
    }
    path = tmp_path / "nested.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    result = _run("solve-nested", "--input", str(path))
    assert result.exit_code == 0
    out = json.loads(result.stdout)
    assert out["ok"] is True
    assert out["residual"] < 1e-12
    assert abs(out["roots"]["x1e"][0][0] - -9.0792186463333) < 1e-9
    assert abs(out["roots"]["u11"][0][0] - -1.3197361875357865) < 1e-9
    assert abs(out["roots"]["x112"][0][0] - -2.119023208181012) < 1e-9


def test_solve_nested_rejects_bad_input(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"h": 1.0}), encoding="utf-8")
    assert _run("solve-nested", "--input", str(path)).exit_code == 2


def test_ads3_residuals_two_particle():
    result = _run("ads3-residuals", "--mode", "two")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["ok"] is True
    assert payload["max_residual"] < 1e-10
    assert abs(payload["momentum_defect"][0]) < 1e-12


def test_ads3_crossing():
    result = _run("ads3-crossing")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["ok"] is True
    assert payload["const"]["passed"] is False
    assert payload["const"]["rel_gap"] == 0.46165266784314857
    assert payload["toy"]["passed"] is True
    assert payload["toy"]["rel_gap"] < 1e-8


def test_suite_subset():
    result = _run("suite", "--only", "hodge")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["ok"] is True and payload["first_failure"] is None
    assert [r["name"] for r in payload["results"]] == ["hodge"]
    assert "[PASS] hodge" in result.stderr


def test_suite_reports_failure_exit_code():
    result = _run("suite", "--only", "truncation", "--tol", "0")
    assert result.exit_code == 1
    payload = json.loads(result.stdout)
    assert payload["ok"] is False
    assert payload["first_failure"] == "truncation"


def test_suite_unknown_battery():
    assert _run("suite", "--only", "nosuch").exit_code == 2
