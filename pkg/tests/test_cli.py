"""End-to-end command-line behavior: files, determinism, exit codes."""

import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from nlijsa import DelaySchedule, intensity
from nlijsa.cli import main, run_verify
from nlijsa.configio import load_config

SMALL = """
[pump]
center_nm = 775.0
sigma_nm = 2.0

[crystal]
material = "KTP"
phase_matching = "qpm"
length_mm = 1.0
axes = ["x", "x", "z"]

[delays]
pump_ps = [0.0, 8.3, 0.0, 8.3]
signal_ps = [8.3, 4.15, 0.0, 0.0]
idler_ps = [0.0, 4.15, 8.3, 0.0]

[loss]
x_db = 0.0

[grid]
center_nm = 1550.0
span_nm = 80.0
points = 64
"""


@pytest.fixture()
def small_config(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(SMALL)
    return path


def read_matrix_csv(path: Path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    col_nm = np.array([float(x) for x in rows[0][1:]])
    row_nm = np.array([float(r[0]) for r in rows[1:]])
    values = np.array([[float(x) for x in r[1:]] for r in rows[1:]])
    return row_nm, col_nm, values


class TestSimulate:
    def test_outputs_and_roundtrip(self, small_config, tmp_path):
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(small_config), "--out", str(out)]) == 0

        manifest = json.loads((out / "manifest.json").read_text())
        listed = set(manifest["outputs"])
        on_disk = {p.name for p in out.iterdir()} - {"manifest.json"}
        assert listed == on_disk
        for name in listed:
            assert (out / name).stat().st_size > 0

        row_nm, col_nm, jsi = read_matrix_csv(out / "jsi.csv")
        setup = load_config(small_config)
        state = setup.assemble()
        # printed with 17 significant digits, so re-reading is exact
        assert np.array_equal(jsi, intensity(state))
        assert np.array_equal(row_nm, setup.grid_s.wavelengths * 1e9)
        assert math.isclose(manifest["config"]["pump"]["center_nm"], 775.0)
        assert manifest["schmidt_number"] >= 1.0

    def test_byte_identical_runs(self, small_config, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", str(small_config), "--out", str(out1)]) == 0
        assert main(["simulate", "--config", str(small_config), "--out", str(out2)]) == 0
        for name in json.loads((out1 / "manifest.json").read_text())["outputs"]:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name

    def test_preset_and_config_conflict(self, small_config, tmp_path, capsys):
        code = main(["simulate", "--preset", "grid", "--config", str(small_config),
                     "--out", str(tmp_path / "x")])
        assert code == 2
        assert "either" in capsys.readouterr().err

    def test_source_required(self, tmp_path):
        assert main(["simulate", "--out", str(tmp_path / "x")]) == 2

    def test_bad_config_key_diagnostic(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text(SMALL.replace("center_nm = 1550.0", ""))
        assert main(["simulate", "--config", str(bad), "--out", str(tmp_path / "x")]) == 2
        assert "grid.center_nm" in capsys.readouterr().err

    def test_numeric_failure_exit_code(self, tmp_path, capsys):
        # a pump that underflows to zero over the whole window: exit 3
        bad = tmp_path / "zero.toml"
        bad.write_text(SMALL.replace("center_nm = 775.0", "center_nm = 500.0")
                            .replace("sigma_nm = 2.0", "sigma_nm = 0.01"))
        assert main(["simulate", "--config", str(bad), "--out", str(tmp_path / "x")]) == 3
        assert "numeric" in capsys.readouterr().err


class TestProject:
    def test_projection_file(self, small_config, tmp_path):
        out = tmp_path / "proj"
        code = main(["project", "--config", str(small_config), "--lambda-s", "1550",
                     "--out", str(out)])
        assert code == 0
        with open(out / "idler_projection.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["wavelength_nm", "intensity"]
        assert len(rows) == 65
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["lambda_s_nm"] == 1550
        assert manifest["bin_width_rad_s"] > 0

    def test_lambda_outside_grid(self, small_config, tmp_path, capsys):
        code = main(["project", "--config", str(small_config), "--lambda-s", "1700",
                     "--out", str(tmp_path / "x")])
        assert code == 2
        assert "outside" in capsys.readouterr().err


class TestLossSweep:
    def test_sweep_table(self, small_config, tmp_path):
        out = tmp_path / "sweep"
        code = main(["loss-sweep", "--config", str(small_config), "--x-range", "0:20:6",
                     "--out", str(out)])
        assert code == 0
        with open(out / "loss_sweep.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x_db", "schmidt_number", "overlap_with_lossless", "overlap_with_unmodulated"]
        assert len(rows) == 7
        assert float(rows[1][2]) == 1.0
        manifest = json.loads((out / "manifest.json").read_text())
        for name in manifest["outputs"]:
            assert (out / name).is_file()
        # mode dumps for the default selected loss values inside the range
        assert any(name.startswith("jsi_x4dB") for name in manifest["outputs"])
        assert any(name.startswith("mode1_idler_x10dB") for name in manifest["outputs"])

    def test_single_step_rejected(self, small_config, tmp_path):
        assert main(["loss-sweep", "--config", str(small_config), "--x-range", "0:20:1",
                     "--out", str(tmp_path / "x")]) == 2

    def test_malformed_range(self, small_config, tmp_path):
        assert main(["loss-sweep", "--config", str(small_config), "--x-range", "0-20-41",
                     "--out", str(tmp_path / "x")]) == 2


class TestVerify:
    def test_passes_and_deterministic_report(self, capsys):
        assert main(["verify", "--seed", "99"]) == 0
        first = capsys.readouterr().out
        assert main(["verify", "--seed", "99"]) == 0
        second = capsys.readouterr().out
        assert first == second
        assert first.count("PASS") == 10

    def test_detects_corrupted_delay_table(self, capsys):
        def corrupted(tau):
            good = DelaySchedule.grid(tau)
            return DelaySchedule(good.tau_p, (good.tau_s[0] * 1.25,) + good.tau_s[1:], good.tau_i)

        ok = run_verify(seed=5, n_points=500, grid_schedule=corrupted)
        assert ok is False
        assert "FAIL" in capsys.readouterr().out

    def test_cli_exit_code_on_failure(self, monkeypatch, capsys):
        import nlijsa.cli as climod

        def corrupted(tau):
            # idler delay of the first crystal zeroed out
            return DelaySchedule((0.0, tau, tau / 2, 0.0), (0.0, tau, 0.0, 0.0),
                                 (0.0, 0.0, 0.0, 0.0))

        monkeypatch.setattr(climod.DelaySchedule, "hde", corrupted)
        assert main(["verify", "--seed", "3"]) == 1
