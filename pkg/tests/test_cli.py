import csv
import json
import subprocess
import sys

import pytest

from homstab.cli import main
from homstab.decay import sharp_constant


def run(args, capsys):
    code = main(args)
    return code, capsys.readouterr()


def test_classify_origin(tmp_path, capsys):
    code, out = run(["classify", "--c", "0", "0", "0", "--out", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "classify.json").read_text())
    assert doc["cbar3"] == -4.0
    assert abs(doc["gamma_minus"] + 2.0) <= 1e-6 and abs(doc["gamma_plus"] - 2.0) <= 1e-6
    assert "verdict: in_J" in out.out


def test_classify_outside_J(tmp_path, capsys):
    code, out = run(["classify", "--c", "-2", "0", "0", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "outside_J" in out.out


def test_malformed_flag_exits_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["classify", "--c", "zero", "0", "0", "--out", str(tmp_path)])
    assert info.value.code == 2
    code, _ = run(["classify", "--c", "0", "0", "--out", str(tmp_path)], capsys)
    assert code == 2


def test_constants_row(tmp_path, capsys):
    code, out = run(["constants", "--q", "6", "--tau", "0.5", "--out", str(tmp_path)], capsys)
    assert code == 0
    with open(tmp_path / "constants.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1 and float(rows[0]["c_q"]) == sharp_constant(6.0, 0.5)


def test_verify_hardy_type(tmp_path, capsys):
    code, out = run(["verify", "--suite", "ckn-hardy", "--alpha", "0.5", "--out", str(tmp_path)], capsys)
    assert code == 0 and "PASS" in out.out
    assert json.loads((tmp_path / "verify.json").read_text())["passed"] is True


def test_simulate_zero_initial_data(tmp_path, capsys):
    args = ["simulate", "--kind", "zero", "--N", "16", "--rho-m", "1.0", "--T", "0.05", "--out", str(tmp_path)]
    code, _ = run(args, capsys)
    assert code == 0
    with open(tmp_path / "norms.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6
    assert all(float(v) == 0.0 for r in rows for k, v in r.items() if k != "t")
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["status"] == "done" and "norms.csv" in manifest["outputs"]


def test_config_file_and_flag_priority(tmp_path, capsys):
    ini = tmp_path / "run.ini"
    ini.write_text("[grid]\nN = 16\n[mollifier]\nrho_m = 1.0\n[time]\nT = 0.1\ndt = 0.02\n", encoding="utf-8")
    out = tmp_path / "o"
    code, _ = run(["simulate", "--config", str(ini), "--T", "0.04", "--out", str(out)], capsys)
    assert code == 0
    cfg = json.loads((out / "manifest.json").read_text())["config"]
    assert cfg["grid"]["N"] == 16 and cfg["time"]["T"] == 0.04 and cfg["time"]["dt"] == 0.02


def test_unknown_config_key(tmp_path, capsys):
    ini = tmp_path / "bad.ini"
    ini.write_text("[grid]\nM = 16\n", encoding="utf-8")
    code, out = run(["simulate", "--config", str(ini), "--out", str(tmp_path)], capsys)
    assert code == 2 and "unknown config key" in out.err


def test_replay_is_byte_identical(tmp_path, capsys):
    first = tmp_path / "a"
    args = ["simulate", "--N", "16", "--rho-m", "1.0", "--T", "0.06", "--dt", "0.02", "--seed", "7",
            "--out", str(first)]
    assert run(args, capsys)[0] == 0
    second = tmp_path / "b"
    assert run(["replay", str(first / "manifest.json"), "--out", str(second)], capsys)[0] == 0
    assert (first / "norms.csv").read_bytes() == (second / "norms.csv").read_bytes()
    assert (first / "final.chk").read_bytes() == (second / "final.chk").read_bytes()


def test_exit_codes(tmp_path, capsys):
    code, out = run(["simulate", "--c1", "1", "--N", "16", "--rho-m", "1.0", "--out", str(tmp_path)], capsys)
    assert code == 2 and "not in M" in out.err
    code, out = run(["simulate", "--c3", "1", "--dt", "2", "--T", "2", "--N", "16", "--rho-m", "1.0",
                     "--out", str(tmp_path)], capsys)
    assert code == 3 and "CFLViolation" in out.err
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["status"].startswith("failed")


def test_output_dir_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("HOMSTAB_OUTPUT_DIR", str(tmp_path / "env"))
    assert run(["constants", "--q", "4", "--tau", "0.5"], capsys)[0] == 0
    assert (tmp_path / "env" / "constants.csv").exists()


def test_sweep(tmp_path, capsys):
    args = ["sweep", "--N", "16", "--rho-m", "1.0", "--T", "0.04", "--dt", "0.02", "--c3-values", "0.05", "0.1",
            "--seeds", "0", "1", "--workers", "2", "--out", str(tmp_path)]
    assert run(args, capsys)[0] == 0
    with open(tmp_path / "sweep.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    assert (tmp_path / "run-001-seed-1" / "manifest.json").exists()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "homstab", "classify", "--c", "0", "0", "1", "--out", str(tmp_path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "verdict" in proc.stdout
