"""Ready-made device constants and drive configurations.

The device preset is an experimentally realistic combination: a 282 THz
optical cavity and a 7.1 GHz microwave (LC) cavity sharing a 5.6 MHz
mechanical resonator, with single-photon couplings of 2pi*27 Hz (optical)
and 2pi*2.7 Hz (microwave).  It is the parameter set used throughout the
test suite and the demo scripts.
"""

import numpy as np

from .model import DriveConfig, STANDARD, SystemParams

__all__ = ["example_device", "red_red_drive", "blue_red_drive"]

TWO_PI = 2.0 * np.pi


def example_device():
    """Reference device constants (all rates angular, rad/s)."""
    kappa_o = TWO_PI * 1.65e6
    kappa_e = TWO_PI * 1.6e6
    return SystemParams(
        omega_o=TWO_PI * 282e12,
        omega_e=TWO_PI * 7.1e9,
        kappa_o=kappa_o,
        kappa_e=kappa_e,
        kappa_o_ext=0.76 * kappa_o,
        kappa_e_ext=0.11 * kappa_e,
        g_o=TWO_PI * 27.0,
        g_e=TWO_PI * 2.7,
        omega_m=TWO_PI * 5.6e6,
        gamma_m=TWO_PI * 4.0,
    )


def red_red_drive(params, P_o, P_e, P_p=0.0, convention=STANDARD):
    """Both pumps on their red sidebands (Delta = +omega_m).

    This is the transparency-window configuration.
    """
    return DriveConfig(P_o=P_o, P_e=P_e, P_p=P_p,
                       Delta_o=params.omega_m, Delta_e=params.omega_m,
                       convention=convention)


def blue_red_drive(params, P_o, P_e, P_p=0.0, convention=STANDARD):
    """Optical pump on the blue sideband (Delta_o = -omega_m), microwave pump
    on the red sideband.

    This is the absorption/amplification configuration; the microwave pump
    provides the damping that keeps the operating point stable.
    """
    return DriveConfig(P_o=P_o, P_e=P_e, P_p=P_p,
                       Delta_o=-params.omega_m, Delta_e=params.omega_m,
                       convention=convention)
