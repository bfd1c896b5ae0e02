from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

import hybridoem as h


class TestMechanicalDenominator:
    def test_no_pumps_at_mechanical_resonance(self, device, no_pump):
        _, ss = no_pump
        f = h.effective_mechanical_denominator(device.omega_m, device, ss)
        assert_allclose(f, 1j * device.gamma_m, rtol=1e-12)

    def test_no_pumps_at_zero_beat(self, device, no_pump):
        _, ss = no_pump
        f = h.effective_mechanical_denominator(0.0, device, ss)
        assert_allclose(f, -device.omega_m, rtol=1e-12)

    def test_resolved_sideband_estimate(self, device, red_2mw, rates):
        drive, ss = red_2mw
        gam_o, gam_e = rates(device, ss)
        estimate = 1j * (device.gamma_m + gam_o + gam_e)
        f = h.effective_mechanical_denominator(device.omega_m, device, ss)
        assert abs(f - estimate) / abs(f) < 0.2


class TestProbeSideband:
    def test_no_optical_pump_gives_bare_lorentzian(self, device, no_pump):
        drive, ss = no_pump
        E_p = h.drive_amplitudes(device, drive).E_p
        delta = 0.3 * device.kappa_o
        expected = (np.sqrt(device.kappa_o_ext) * E_p
                    / (device.kappa_o + 1j * ss.Delta_o_eff - 1j * delta))
        got = h.probe_sideband_amplitude(delta, device, drive, ss)
        assert_allclose(got, expected, rtol=1e-12)

    def test_zero_probe_gives_zero(self, device, red_2mw):
        drive, ss = red_2mw
        off = replace(drive, P_p=0.0)
        assert h.probe_sideband_amplitude(device.omega_m, device, off, ss) == 0

    def test_matches_brute_force_solve(self, device, red_2mw, blue_40uw):
        for drive, ss in (red_2mw, blue_40uw):
            for delta in (drive.Delta_o, drive.Delta_o + 0.5 * device.kappa_o,
                          0.25 * device.omega_m):
                closed = h.probe_sideband_amplitude(delta, device, drive, ss)
                solved = h.fluctuation_linear_solve(delta, device, drive, ss).a_plus
                assert abs(solved - closed) / abs(closed) < 1e-10


class TestFluctuationSolve:
    def test_decoupled_limit(self, device, red_2mw):
        drive, _ = red_2mw
        nog = replace(device, g_o=0.0, g_e=0.0)
        ss = h.solve_steady_state(nog, drive)
        delta = 0.7 * device.omega_m
        amps = h.fluctuation_linear_solve(delta, nog, drive, ss)
        E_p = h.drive_amplitudes(nog, drive).E_p
        bare = (np.sqrt(nog.kappa_o_ext) * E_p
                / (nog.kappa_o + 1j * ss.Delta_o_eff - 1j * delta))
        assert_allclose(amps.a_plus, bare, rtol=1e-12)
        assert amps.a_minus == 0 and amps.b_plus == 0 and amps.b_minus == 0
        assert amps.q_plus == 0 and amps.q_minus == 0

    def test_displacement_reality(self, device):
        rng = np.random.default_rng(21)
        for _ in range(20):
            P_o = 10.0 ** rng.uniform(-6, -3)
            drive = h.red_red_drive(device, P_o, 1e-6, P_p=1e-9)
            ss = h.solve_steady_state(device, drive)
            delta = rng.uniform(-1.5, 1.5) * device.omega_m
            amps = h.fluctuation_linear_solve(delta, device, drive, ss)
            assert amps.q_minus == np.conj(amps.q_plus)


class TestTransmission:
    def test_bare_resonance_value(self, device, no_pump):
        drive, ss = no_pump
        t = h.probe_transmission(drive.Delta_o, device, ss)
        expected = 1 - device.kappa_o_ext / device.kappa_o
        assert_allclose(t, expected, rtol=1e-12)
        assert_allclose(abs(t) ** 2, 0.0576, rtol=1e-12)

    def test_absorption_point(self, device, blue_10uw, rates):
        drive, ss = blue_10uw
        t = h.probe_transmission(drive.Delta_o, device, ss)
        # resolved-sideband estimate: t ~ 0.24 - 0.16 at this drive
        gam_o, gam_e = rates(device, ss)
        k = device.kappa_o_ext / device.kappa_o
        est = (1 - k) - k * gam_o / (device.gamma_m + gam_e - gam_o)
        assert abs(t - est) / abs(est) < 0.3
        assert abs(t) ** 2 < 0.0576
        assert_allclose(abs(t) ** 2, 0.0070856, rtol=1e-3)  # frozen regression

    def test_amplification_point(self, device, blue_40uw, rates):
        drive, ss = blue_40uw
        t = h.probe_transmission(drive.Delta_o, device, ss)
        gam_o, gam_e = rates(device, ss)
        k = device.kappa_o_ext / device.kappa_o
        est = (1 - k) - k * gam_o / (device.gamma_m + gam_e - gam_o)
        assert abs(t - est) / abs(est) < 0.3
        assert abs(t) ** 2 > 1.0
        assert_allclose(abs(t) ** 2, 2.108996, rtol=1e-3)  # frozen regression

    def test_probe_linearity(self, device, red_2mw):
        """The transmitted ratio is invariant under probe-power rescaling."""
        drive, ss = red_2mw
        delta = device.omega_m + 0.2 * device.kappa_o
        ratios = []
        for scale in (1.0, 97.3):
            d = replace(drive, P_p=scale * drive.P_p)
            E_p = h.drive_amplitudes(device, d).E_p
            probe_out, _ = h.output_field_components(delta, device, d, ss)
            ratios.append(probe_out / E_p)
        assert abs(ratios[0] - ratios[1]) / abs(ratios[0]) < 1e-12
        assert_allclose(ratios[0], h.probe_transmission(delta, device, ss), rtol=1e-10)

    def test_singularity_guard(self, device):
        """With zero mechanical damping the denominator has a real zero."""
        undamped = replace(device, gamma_m=0.0)
        ss = h.solve_steady_state(undamped, h.DriveConfig(Delta_o=undamped.omega_m))
        with pytest.raises(h.SingularResponseError):
            h.probe_transmission(undamped.omega_m, undamped, ss)


class TestOutputComponents:
    def test_no_optical_coupling_kills_four_wave_mixing(self, device, red_2mw):
        drive, _ = red_2mw
        nogo = replace(device, g_o=0.0)
        ss = h.solve_steady_state(nogo, drive)
        _, fwm = h.output_field_components(device.omega_m, nogo, drive, ss)
        assert fwm == 0

    def test_probe_component_equals_transmission(self, device):
        rng = np.random.default_rng(5)
        for _ in range(10):
            drive = h.red_red_drive(device, 10.0 ** rng.uniform(-6, -3), 1e-6,
                                    P_p=1e-9)
            ss = h.solve_steady_state(device, drive)
            delta = rng.uniform(0.5, 1.5) * device.omega_m
            E_p = h.drive_amplitudes(device, drive).E_p
            probe_out, _ = h.output_field_components(delta, device, drive, ss)
            t = h.probe_transmission(delta, device, ss)
            assert_allclose(probe_out / E_p, t, rtol=1e-10)

    def test_transparency_point_has_four_wave_mixing(self, device, red_2mw):
        drive, ss = red_2mw
        _, fwm = h.output_field_components(device.omega_m, device, drive, ss)
        assert abs(fwm) > 0
        # frozen regression of the mixing-to-probe ratio at this point
        E_p = h.drive_amplitudes(device, drive).E_p
        assert_allclose(abs(fwm) / E_p, 0.109227, rtol=1e-3)


class TestGroupDelay:
    def test_bare_cavity_analytic_value(self, device, no_pump):
        drive, ss = no_pump
        k_ratio = device.kappa_o_ext / device.kappa_o
        expected = -k_ratio / ((1 - k_ratio) * device.kappa_o)
        for method in ("analytic", "finite-difference"):
            res = h.group_delay(device, drive, ss, method=method)
            assert_allclose(res.tau_g, expected, rtol=1e-6)

    def test_transparency_is_subluminal(self, device, red_2mw):
        drive, ss = red_2mw
        assert h.group_delay(device, drive, ss).tau_g > 0

    def test_methods_agree(self, device):
        for P_o in (0.0, 2e-3, 3e-3):
            drive = h.red_red_drive(device, P_o, 1e-6, P_p=1e-9)
            ss = h.solve_steady_state(device, drive)
            an = h.group_delay(device, drive, ss, method="analytic")
            fd = h.group_delay(device, drive, ss, method="finite-difference")
            assert abs(an.tau_g - fd.tau_g) / abs(an.tau_g) < 1e-4
            assert fd.step == device.gamma_m / 100

    def test_absorption_zero_crossing_is_ill_conditioned(self, device):
        """Critically coupled bare cavity: |t| = 0 exactly at resonance."""
        critical = replace(device, kappa_o_ext=device.kappa_o)
        drive = h.DriveConfig(Delta_o=device.omega_m, Delta_e=device.omega_m)
        ss = h.solve_steady_state(critical, drive)
        with pytest.raises(h.DelayError):
            h.group_delay(critical, drive, ss)

    def test_unknown_method(self, device, no_pump):
        drive, ss = no_pump
        with pytest.raises(ValueError):
            h.group_delay(device, drive, ss, method="bogus")
