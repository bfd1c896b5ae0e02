from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

import hybridoem as h
from hybridoem.config import RunConfig, parse_config, parse_quantity

CONFIG_DIR = Path(__file__).resolve().parent.parent / "demos" / "configs"

TWO_PI = 2 * np.pi

MINIMAL = """
[system]
omega_o = "2pi*282e12"
omega_e = "2pi*7.1e9"
kappa_o = "2pi*1.65e6"
kappa_e = "2pi*1.6e6"
kappa_o_ext = "2pi*1.254e6"
kappa_e_ext = "2pi*0.176e6"
g_o = "2pi*27"
g_e = "2pi*2.7"
omega_m = "2pi*5.6e6"
gamma_m = "2pi*4"

[drive]
P_o = "2 mW"
P_e = "1 uW"
Delta_o = "2pi*5.6e6"
Delta_e = "2pi*5.6e6"

[task]
type = "steady"
"""


class TestParseQuantity:
    def test_two_pi_prefix(self):
        assert parse_quantity("2pi*5.6e6", "frequency") == TWO_PI * 5.6e6

    def test_negative_two_pi(self):
        assert parse_quantity("-2pi*5.6e6", "frequency") == -(TWO_PI * 5.6e6)

    def test_frequency_suffixes(self):
        assert parse_quantity("1.65 MHz", "frequency") == TWO_PI * 1.65e6
        assert parse_quantity("7.1 GHz", "frequency") == TWO_PI * 7.1e9
        assert parse_quantity("282 THz", "frequency") == TWO_PI * 282e12

    def test_bare_number_is_rad_per_s(self):
        assert parse_quantity(123.0, "frequency") == 123.0
        assert parse_quantity("123", "frequency") == 123.0

    def test_power_suffixes(self):
        assert parse_quantity("2 mW", "power") == 2e-3
        assert parse_quantity("1 uW", "power") == 1e-6
        assert parse_quantity("3 nW", "power") == pytest.approx(3e-9, rel=1e-15)
        assert parse_quantity(0.5, "power") == 0.5

    def test_malformed(self):
        for bad in ("abc", "2pi*", "1..2 MHz", "1 parsec"):
            with pytest.raises(h.ConfigError):
                parse_quantity(bad, "frequency")
        with pytest.raises(h.ConfigError):
            parse_quantity("2pi*1e-3", "power")


class TestParseConfig:
    def test_documented_example(self):
        text = (CONFIG_DIR / "transparency_spectrum.toml").read_text()
        cfg = parse_config(text)
        assert_allclose(cfg.system.omega_o, TWO_PI * 282e12)
        assert_allclose(cfg.system.kappa_o, TWO_PI * 1.65e6)
        assert_allclose(cfg.system.kappa_o_ext, 0.76 * TWO_PI * 1.65e6, rtol=1e-12)
        assert_allclose(cfg.system.g_o, TWO_PI * 27)
        assert_allclose(cfg.system.omega_m, TWO_PI * 5.6e6)
        assert_allclose(cfg.drive.P_o, 2e-3)
        assert_allclose(cfg.drive.Delta_o, TWO_PI * 5.6e6)
        assert cfg.drive.convention == h.STANDARD
        assert cfg.task == "spectrum"
        assert cfg.axis.count == 2001
        assert_allclose(cfg.axis.lo, -3 * cfg.system.kappa_o)

    def test_empty_input(self):
        with pytest.raises(h.ConfigError, match="missing system block"):
            parse_config("")

    def test_negative_rate_fails_validation(self):
        text = MINIMAL.replace('kappa_o = "2pi*1.65e6"', 'kappa_o = "-1 MHz"')
        with pytest.raises(h.ConfigError, match="kappa_o"):
            parse_config(text)

    def test_unknown_key_reports_location(self):
        text = MINIMAL.replace('g_o = "2pi*27"', 'g_oo = "2pi*27"')
        with pytest.raises(h.ConfigError) as err:
            parse_config(text)
        assert "g_oo" in str(err.value)
        assert err.value.line is not None

    def test_missing_required_key(self):
        text = MINIMAL.replace('gamma_m = "2pi*4"\n', "")
        with pytest.raises(h.ConfigError, match="gamma_m"):
            parse_config(text)

    def test_toml_syntax_error_has_location(self):
        with pytest.raises(h.ConfigError) as err:
            parse_config("[system\nx = 1")
        assert err.value.line is not None

    def test_unknown_task_key(self):
        text = MINIMAL.replace('type = "steady"', 'type = "steady"\nbogus = 1')
        with pytest.raises(h.ConfigError, match="bogus"):
            parse_config(text)

    def test_power_sweep_requires_powers(self):
        text = MINIMAL.replace('type = "steady"', 'type = "power-sweep"')
        with pytest.raises(h.ConfigError, match="power"):
            parse_config(text)

    def test_power_list(self):
        text = MINIMAL.replace(
            'type = "steady"',
            'type = "power-sweep"\npowers = ["1 uW", "2 uW", "3 uW"]')
        cfg = parse_config(text)
        assert cfg.powers == (1e-6, 2e-6, 3e-6)

    def test_nonincreasing_powers_rejected(self):
        text = MINIMAL.replace(
            'type = "steady"',
            'type = "power-sweep"\npowers = ["2 uW", "1 uW"]')
        with pytest.raises(h.ConfigError, match="increasing"):
            parse_config(text)

    def test_echo_roundtrip(self):
        text = (CONFIG_DIR / "gain_power_scan.toml").read_text()
        cfg = parse_config(text)
        rebuilt = RunConfig.from_dict(cfg.to_dict())
        assert rebuilt == cfg

    def test_echo_roundtrip_with_axis(self):
        text = (CONFIG_DIR / "transparency_spectrum.toml").read_text()
        cfg = parse_config(text)
        assert RunConfig.from_dict(cfg.to_dict()) == cfg
