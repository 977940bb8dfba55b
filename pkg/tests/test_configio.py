"""Configuration parsing and coefficient-set override files."""

import numpy as np
import pytest

from nlijsa import ConfigError, delta_k, wavelength_to_omega
from nlijsa.configio import describe, load_config

GOOD = """
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
x_db = 1.5

[grid]
center_nm = 1550.0
span_nm = 80.0
points = 64
"""


def write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadConfig:
    def test_good_config(self, tmp_path):
        setup = load_config(write(tmp_path, GOOD))
        assert setup.pump.center_wavelength == pytest.approx(775e-9)
        assert setup.schedule.tau_s == pytest.approx((8.3e-12, 4.15e-12, 0.0, 0.0))
        assert setup.loss.x_db == 1.5
        assert setup.grid_s.n_points == 64
        assert setup.crystal.length == pytest.approx(1e-3)
        # omitted poling period is solved at the degenerate pump point
        omega = wavelength_to_omega(1550e-9)
        assert abs(delta_k(setup.crystal, omega, omega)) < 1e-6

    def test_explicit_poling_period(self, tmp_path):
        text = GOOD.replace('axes = ["x", "x", "z"]', 'axes = ["x", "x", "z"]\npoling_period_um = 34.885')
        setup = load_config(write(tmp_path, text))
        assert setup.crystal.poling_period == pytest.approx(34.885e-6)

    def test_angle_crystal(self, tmp_path):
        text = GOOD.replace('material = "KTP"', 'material = "LiNbO3"')
        text = text.replace('phase_matching = "qpm"', 'phase_matching = "angle"\ntheta_deg = 30.0')
        text = text.replace('axes = ["x", "x", "z"]', 'axes = ["e", "o", "e"]')
        setup = load_config(write(tmp_path, text))
        assert setup.crystal.theta == pytest.approx(np.pi / 6)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.toml")

    def test_missing_section_names_key(self, tmp_path):
        bad = GOOD.replace("[grid]", "[grrrid]")
        with pytest.raises(ConfigError) as err:
            load_config(write(tmp_path, bad))
        assert "grid" in str(err.value)

    def test_missing_key_named(self, tmp_path):
        bad = GOOD.replace("sigma_nm = 2.0", "")
        with pytest.raises(ConfigError) as err:
            load_config(write(tmp_path, bad))
        assert "pump.sigma_nm" in str(err.value)

    def test_bad_material_named(self, tmp_path):
        bad = GOOD.replace('"KTP"', '"unobtainium"')
        with pytest.raises(ConfigError) as err:
            load_config(write(tmp_path, bad))
        assert "crystal.material" in str(err.value)

    def test_angle_without_theta(self, tmp_path):
        bad = GOOD.replace('phase_matching = "qpm"', 'phase_matching = "angle"')
        bad = bad.replace('axes = ["x", "x", "z"]', 'axes = ["x", "x", "z"]')
        with pytest.raises(ConfigError) as err:
            load_config(write(tmp_path, bad))
        assert "theta_deg" in str(err.value)

    def test_unequal_delay_lists(self, tmp_path):
        bad = GOOD.replace("pump_ps = [0.0, 8.3, 0.0, 8.3]", "pump_ps = [0.0, 8.3]")
        with pytest.raises(ConfigError) as err:
            load_config(write(tmp_path, bad))
        assert "delays" in str(err.value)

    def test_non_numeric_value(self, tmp_path):
        bad = GOOD.replace("x_db = 1.5", 'x_db = "lots"')
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, bad))

    def test_invalid_toml(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "pump = [unclosed"))


SELLMEIER_OVERRIDE = """
[KTP]
source = "constant test stub"

[KTP.axes.x]
constant = 4.0
valid_range_nm = [100.0, 5000.0]
poles = []

[KTP.axes.z]
constant = 4.41
valid_range_nm = [100.0, 5000.0]
poles = []
"""


class TestSellmeierOverride:
    def test_override_changes_dispersion(self, tmp_path):
        write(tmp_path, SELLMEIER_OVERRIDE, name="coeffs.toml")
        text = GOOD.replace('phase_matching = "qpm"', 'phase_matching = "qpm"\npoling_period_um = 10.0')
        text += '\n[sellmeier]\nfile = "coeffs.toml"\n'
        setup = load_config(write(tmp_path, text))
        assert setup.crystal.sellmeier.axes["x"].constant == 4.0
        assert setup.crystal.sellmeier.axes["x"].source == "constant test stub"
        # n_s = n_p = 2.0, n_i = 2.1: dk_bare = 0.5*(2.0 + 2.1 - 2*2.0)*w/c
        omega = wavelength_to_omega(1550e-9)
        expected = (2.0 * omega + 2.1 * omega - 2.0 * 2 * omega) / 299792458.0 - 2 * np.pi / 10e-6
        assert delta_k(setup.crystal, omega, omega) == pytest.approx(expected, rel=1e-12)

    def test_missing_override_file(self, tmp_path):
        text = GOOD + '\n[sellmeier]\nfile = "absent.toml"\n'
        with pytest.raises(ConfigError) as err:
            load_config(write(tmp_path, text))
        assert "sellmeier.file" in str(err.value)

    def test_bad_pole_power(self, tmp_path):
        bad = SELLMEIER_OVERRIDE.replace("poles = []", "poles = [[1.0, 0.1, 3]]", 1)
        write(tmp_path, bad, name="coeffs.toml")
        text = GOOD + '\n[sellmeier]\nfile = "coeffs.toml"\n'
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, text))


class TestDescribe:
    def test_roundtrip_fields(self, tmp_path):
        setup = load_config(write(tmp_path, GOOD))
        echo = describe(setup)
        assert echo["pump"]["center_nm"] == pytest.approx(775.0)
        assert echo["crystal"]["material"] == "KTP"
        assert echo["crystal"]["poling_period_um"] is not None
        assert echo["delays_ps"]["signal"] == pytest.approx([8.3, 4.15, 0.0, 0.0])
        assert echo["loss_db"] == 1.5
        assert echo["grid"]["points"] == 64
        assert "Kato" in echo["crystal"]["sellmeier_sources"]["x"]
