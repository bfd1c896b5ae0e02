"""Parameter containers, drive-amplitude conventions, and detuning bookkeeping.

All frequencies, detunings and rates are angular (rad/s); powers are in W.
Conversion from "2pi*X Hz" style inputs happens at the config boundary
(:mod:`hybridoem.config`), never inside the physics.

The two cavities are labelled ``o`` (optical) and ``e`` (microwave); the
shared mechanical resonator has frequency ``omega_m`` and damping ``gamma_m``.
``kappa_o``/``kappa_e`` are the amplitude decay rates that appear in the
field equations of motion, and ``kappa_o_ext``/``kappa_e_ext`` the parts of
those rates associated with the external (propagating) port.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ValidationError

__all__ = [
    "HBAR",
    "PhysicalConstants",
    "Convention",
    "STANDARD",
    "PAPER_LITERAL",
    "SystemParams",
    "DriveConfig",
    "DriveAmplitudes",
    "ValidationReport",
    "ValidationError",
    "validate_params",
    "pump_amplitude",
    "drive_amplitudes",
    "probe_detuning",
    "pump_beat_detuning",
]

#: Reduced Planck constant, J*s (CODATA 2018).
HBAR = 1.054571817e-34


@dataclass(frozen=True)
class PhysicalConstants:
    """Physical constants used by the model (only hbar so far)."""

    hbar: float = HBAR

    def __post_init__(self):
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")


class Convention:
    """Names of the supported power-to-drive-amplitude mappings.

    ``standard``      |E| = sqrt(P / (hbar*Omega)), the photon-flux amplitude
                      in sqrt(photons/s).
    ``paper-literal`` |E| = sqrt(2*P*kappa / (hbar*Omega)), a literature
                      convention that folds the cavity linewidth into the
                      drive amplitude (units 1/s).
    """

    STANDARD = "standard"
    PAPER_LITERAL = "paper-literal"
    ALL = (STANDARD, PAPER_LITERAL)


STANDARD = Convention.STANDARD
PAPER_LITERAL = Convention.PAPER_LITERAL


@dataclass(frozen=True)
class SystemParams:
    """Fixed device constants of the two-cavity electro-optomechanical system.

    Parameters
    ----------
    omega_o, omega_e : float
        Optical / microwave cavity resonance frequencies, rad/s.
    kappa_o, kappa_e : float
        Cavity amplitude decay rates as they enter the field equations, rad/s.
    kappa_o_ext, kappa_e_ext : float
        External (port) coupling rates, rad/s.  Must not exceed the totals.
    g_o, g_e : float
        Single-photon coupling rates to the mechanical mode, rad/s.
    omega_m : float
        Mechanical resonance frequency, rad/s.
    gamma_m : float
        Mechanical damping rate, rad/s.
    """

    omega_o: float
    omega_e: float
    kappa_o: float
    kappa_e: float
    kappa_o_ext: float
    kappa_e_ext: float
    g_o: float
    g_e: float
    omega_m: float
    gamma_m: float


@dataclass(frozen=True)
class DriveConfig:
    """Pump/probe powers and pump detunings.

    ``Delta_o``/``Delta_e`` are cavity-minus-pump detunings (omega_cav -
    Omega_pump, rad/s); positive values drive the lower (red) sideband.
    ``convention`` selects the power-to-amplitude mapping, see
    :class:`Convention`.
    """

    P_o: float = 0.0
    P_e: float = 0.0
    P_p: float = 0.0
    Delta_o: float = 0.0
    Delta_e: float = 0.0
    convention: str = STANDARD


@dataclass(frozen=True)
class DriveAmplitudes:
    """Real, nonnegative drive amplitudes (pump phases gauged to zero)."""

    E_o: float
    E_e: float
    E_p: float


@dataclass
class ValidationReport:
    """Outcome of parameter validation: hard errors and soft warnings."""

    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.errors

    def __bool__(self):
        return self.ok


def validate_params(params, drive):
    """Check model invariants; returns a report, never raises.

    Hard errors: nonpositive device constants, external coupling exceeding
    the total decay rate, negative powers, unknown convention.  Soft
    warnings: probe not weak relative to the optical pump, cavities not
    sideband resolved.
    """
    rep = ValidationReport()
    positive = [
        ("omega_o", params.omega_o), ("omega_e", params.omega_e),
        ("kappa_o", params.kappa_o), ("kappa_e", params.kappa_e),
        ("kappa_o_ext", params.kappa_o_ext), ("kappa_e_ext", params.kappa_e_ext),
        ("g_o", params.g_o), ("g_e", params.g_e),
        ("omega_m", params.omega_m), ("gamma_m", params.gamma_m),
    ]
    for name, value in positive:
        if not np.isfinite(value) or value <= 0:
            rep.errors.append(f"{name} must be strictly positive (got {value!r})")
    if params.kappa_o_ext > params.kappa_o:
        rep.errors.append("kappa_o_ext exceeds kappa_o (external rate cannot exceed total)")
    if params.kappa_e_ext > params.kappa_e:
        rep.errors.append("kappa_e_ext exceeds kappa_e (external rate cannot exceed total)")
    for name, value in [("P_o", drive.P_o), ("P_e", drive.P_e), ("P_p", drive.P_p)]:
        if not np.isfinite(value) or value < 0:
            rep.errors.append(f"{name} must be nonnegative (got {value!r})")
    for name, value in [("Delta_o", drive.Delta_o), ("Delta_e", drive.Delta_e)]:
        if not np.isfinite(value):
            rep.errors.append(f"{name} must be finite (got {value!r})")
    if drive.convention not in Convention.ALL:
        rep.errors.append(f"unknown convention {drive.convention!r}")
    if rep.errors:
        return rep
    if drive.P_o > 0 and drive.P_p > 0.01 * drive.P_o:
        rep.warnings.append("probe not weak: P_p > 0.01*P_o")
    if params.omega_m / params.kappa_o < 1:
        rep.warnings.append("optical cavity not sideband resolved (omega_m/kappa_o < 1)")
    if params.omega_m / params.kappa_e < 1:
        rep.warnings.append("microwave cavity not sideband resolved (omega_m/kappa_e < 1)")
    return rep


def pump_amplitude(P, kappa, Omega, convention=STANDARD):
    """Drive amplitude for an applied power.

    Parameters
    ----------
    P : float
        Applied power, W.
    kappa : float
        Amplitude decay rate of the driven cavity, rad/s (only used by the
        ``paper-literal`` convention).
    Omega : float
        Carrier angular frequency of the applied field, rad/s.  The cavity
        resonance is an adequate stand-in: MHz-scale detunings are
        negligible against THz/GHz carriers (< 1e-5 relative).
    convention : str
        ``standard`` -> sqrt(P/(hbar*Omega)); ``paper-literal`` ->
        sqrt(2*P*kappa/(hbar*Omega)).

    Returns
    -------
    float
        Nonnegative real amplitude.
    """
    if kappa <= 0:
        raise ValueError(f"kappa must be positive (got {kappa!r})")
    if Omega <= 0:
        raise ValueError(f"Omega must be positive (got {Omega!r})")
    if P < 0:
        raise ValueError(f"P must be nonnegative (got {P!r})")
    if convention == STANDARD:
        return np.sqrt(P / (HBAR * Omega))
    if convention == PAPER_LITERAL:
        return np.sqrt(2.0 * P * kappa / (HBAR * Omega))
    raise ValueError(f"unknown convention {convention!r}")


def drive_amplitudes(params, drive):
    """All three drive amplitudes for a drive configuration.

    The probe shares the optical port, so its ``paper-literal`` amplitude
    uses kappa_o.
    """
    conv = drive.convention
    return DriveAmplitudes(
        E_o=pump_amplitude(drive.P_o, params.kappa_o, params.omega_o, conv),
        E_e=pump_amplitude(drive.P_e, params.kappa_e, params.omega_e, conv),
        E_p=pump_amplitude(drive.P_p, params.kappa_o, params.omega_o, conv),
    )


def probe_detuning(delta, Delta_o):
    """Probe-cavity detuning Delta_p = Omega_p - omega_o from the pump-probe
    beat detuning delta = Omega_p - Omega_o.

    Since Delta_o = omega_o - Omega_o, the map is Delta_p = delta - Delta_o.
    Accepts scalars or arrays.
    """
    return np.asarray(delta) - Delta_o if np.ndim(delta) else delta - Delta_o


def pump_beat_detuning(Delta_p, Delta_o):
    """Inverse of :func:`probe_detuning`: delta = Delta_p + Delta_o."""
    return np.asarray(Delta_p) + Delta_o if np.ndim(Delta_p) else Delta_p + Delta_o


def with_power(drive, **kwargs):
    """Copy a drive config with some fields replaced (continuation helper)."""
    return replace(drive, **kwargs)
