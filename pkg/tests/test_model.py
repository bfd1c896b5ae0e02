import numpy as np
import pytest
from numpy.testing import assert_allclose

import hybridoem as h
from hybridoem.model import HBAR

TWO_PI = 2 * np.pi


def test_hbar_value():
    assert HBAR == 1.054571817e-34
    with pytest.raises(ValueError):
        h.PhysicalConstants(hbar=-1.0)


class TestPumpAmplitude:
    def test_zero_power_both_conventions(self):
        for conv in (h.STANDARD, h.PAPER_LITERAL):
            assert h.pump_amplitude(0.0, 1e7, 1e15, conv) == 0.0

    def test_linewidth_folded_value(self):
        # direct evaluation of sqrt(2 P kappa / (hbar Omega))
        P, kappa, Omega = 2e-3, TWO_PI * 1.65e6, TWO_PI * 282e12
        expected = np.sqrt(2 * P * kappa / (HBAR * Omega))
        got = h.pump_amplitude(P, kappa, Omega, h.PAPER_LITERAL)
        assert got == expected
        assert_allclose(got, 4.71e11, rtol=1e-2)

    def test_photon_flux_value(self):
        P, Omega = 1e-6, TWO_PI * 7.1e9
        expected = np.sqrt(P / (HBAR * Omega))
        got = h.pump_amplitude(P, 1e7, Omega, h.STANDARD)
        assert got == expected
        assert_allclose(got, 4.61e8, rtol=1e-2)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            h.pump_amplitude(1e-3, 0.0, 1e15)
        with pytest.raises(ValueError):
            h.pump_amplitude(1e-3, 1e7, -1e15)
        with pytest.raises(ValueError):
            h.pump_amplitude(-1e-3, 1e7, 1e15)
        with pytest.raises(ValueError):
            h.pump_amplitude(1e-3, 1e7, 1e15, "bogus")

    def test_four_times_power_doubles_amplitude(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            P = 10.0 ** rng.uniform(-9, 0)
            kappa = 10.0 ** rng.uniform(5, 8)
            Omega = 10.0 ** rng.uniform(9, 16)
            for conv in (h.STANDARD, h.PAPER_LITERAL):
                assert h.pump_amplitude(4 * P, kappa, Omega, conv) == \
                    2 * h.pump_amplitude(P, kappa, Omega, conv)

    def test_convention_ratio_is_sqrt_two_kappa(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            P = 10.0 ** rng.uniform(-9, 0)
            kappa = 10.0 ** rng.uniform(5, 8)
            Omega = 10.0 ** rng.uniform(9, 16)
            lit = h.pump_amplitude(P, kappa, Omega, h.PAPER_LITERAL)
            std = h.pump_amplitude(P, kappa, Omega, h.STANDARD)
            assert_allclose(lit / std, np.sqrt(2 * kappa), rtol=1e-13)

    def test_monotone_in_power(self):
        P = np.linspace(0, 1e-3, 50)
        amps = [h.pump_amplitude(x, 1e7, 1e15) for x in P]
        assert np.all(np.diff(amps) > 0)


class TestProbeAxisMap:
    def test_red_sideband_resonance(self, device):
        wm = device.omega_m
        assert h.probe_detuning(wm, wm) == 0.0

    def test_blue_sideband_resonance(self, device):
        wm = device.omega_m
        assert h.probe_detuning(-wm, -wm) == 0.0

    def test_zero_beat(self, device):
        wm = device.omega_m
        assert h.probe_detuning(0.0, wm) == -wm

    def test_roundtrip_identity(self, device):
        rng = np.random.default_rng(3)
        delta = rng.uniform(-1e8, 1e8, size=200)
        Delta_o = device.omega_m
        back = h.pump_beat_detuning(h.probe_detuning(delta, Delta_o), Delta_o)
        assert_allclose(back, delta, rtol=0, atol=1e-7)


class TestValidate:
    def test_reference_device_clean(self, device):
        rep = h.validate_params(device, h.red_red_drive(device, 2e-3, 1e-6))
        assert rep.ok and not rep.warnings

    def test_external_rate_exceeds_total(self, device):
        from dataclasses import replace
        bad = replace(device, kappa_o_ext=2 * device.kappa_o)
        rep = h.validate_params(bad, h.DriveConfig())
        assert not rep.ok
        assert any("kappa_o_ext" in e for e in rep.errors)

    def test_probe_not_weak_warning(self, device):
        d = h.DriveConfig(P_o=1e-6, P_p=1e-6, Delta_o=device.omega_m)
        rep = h.validate_params(device, d)
        assert rep.ok
        assert any("probe not weak" in w for w in rep.warnings)

    def test_negative_power_fails(self, device):
        rep = h.validate_params(device, h.DriveConfig(P_o=-1e-6))
        assert not rep.ok

    def test_sideband_resolution_warning(self, device):
        from dataclasses import replace
        sloppy = replace(device, kappa_o=10 * device.omega_m,
                         kappa_o_ext=0.76 * 10 * device.omega_m)
        rep = h.validate_params(sloppy, h.DriveConfig())
        assert rep.ok
        assert any("sideband" in w for w in rep.warnings)
