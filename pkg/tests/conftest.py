import numpy as np
import pytest

import hybridoem as h


@pytest.fixture(scope="session")
def device():
    return h.example_device()


@pytest.fixture(scope="session")
def red_2mw(device):
    """Transparency operating point: red/red, P_o = 2 mW, P_e = 1 uW."""
    drive = h.red_red_drive(device, 2e-3, 1e-6, P_p=1e-9)
    return drive, h.solve_steady_state(device, drive)


@pytest.fixture(scope="session")
def blue_10uw(device):
    drive = h.blue_red_drive(device, 10e-6, 1e-6, P_p=1e-9)
    return drive, h.solve_steady_state(device, drive)


@pytest.fixture(scope="session")
def blue_40uw(device):
    drive = h.blue_red_drive(device, 40e-6, 1e-6, P_p=1e-9)
    return drive, h.solve_steady_state(device, drive)


@pytest.fixture(scope="session")
def no_pump(device):
    """All pumps off (probe only)."""
    drive = h.DriveConfig(P_p=1e-9, Delta_o=device.omega_m, Delta_e=device.omega_m)
    return drive, h.solve_steady_state(device, drive)


def cooperativity_rates(params, ss):
    """Pump-induced damping scales g^2 n / kappa for both cavities."""
    return (params.g_o**2 * ss.n_o / params.kappa_o,
            params.g_e**2 * ss.n_e / params.kappa_e)


@pytest.fixture(scope="session")
def rates():
    return cooperativity_rates
