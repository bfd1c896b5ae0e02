"""Closed-form probe response and the sideband linear solve.

With both pumps on and a weak probe detuned by ``delta`` from the optical
pump, the first-order sidebands of the fluctuations around the steady state
obey a linear system.  Its closed-form solution for the probe-frequency
sideband of the optical field is

    a_plus = sqrt(kappa_o_ext) E_p / (kappa_o + i Delta_o' - i delta)
             - (i g_o^2 n_o / f(delta))
               * sqrt(kappa_o_ext) E_p / (kappa_o + i Delta_o' - i delta)^2

with the effective mechanical denominator

    f(delta) = 2 Delta_o' g_o^2 n_o / ((kappa_o - i delta)^2 + Delta_o'^2)
             + 2 Delta_e' g_e^2 n_e / ((kappa_e - i delta)^2 + Delta_e'^2)
             - (omega_m^2 - delta^2 - i delta gamma_m) / omega_m.

The probe transmission follows from input-output theory,

    t = 1 - [kappa_o_ext / u - (1/f) * i g_o^2 n_o kappa_o_ext / u^2],
    u = kappa_o + i Delta_o' - i delta,

and is independent of the probe amplitude.  :func:`fluctuation_linear_solve`
solves the full 6x6 sideband system and is the brute-force cross-check of
the closed forms; both describe the same linear model, in the normalization
where the displacement sideband responds to g*(a_s* da + a_s da+) with
susceptibility omega_m / (omega_m^2 - delta^2 - i delta gamma_m).  Note the
time-domain simulator and the stability matrix propagate the displacement
quadrature with twice that drive coefficient; the two normalizations differ
only at cooperativities of order unity (effectively gamma_m versus
gamma_m/2 inside f), far below every regime treated here.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DelayError, SingularResponseError
from .model import drive_amplitudes, probe_detuning

__all__ = [
    "ResponsePoint",
    "FluctuationAmplitudes",
    "DelayResult",
    "effective_mechanical_denominator",
    "probe_sideband_amplitude",
    "fluctuation_linear_solve",
    "probe_transmission",
    "output_field_components",
    "response_point",
    "group_delay",
]


@dataclass(frozen=True)
class ResponsePoint:
    """Probe response at one pump-probe detuning.

    ``delta`` is the pump-probe beat detuning, ``Delta_p`` the probe-cavity
    detuning; ``f_val`` the effective mechanical denominator; ``t`` the
    complex transmission with ``t_sq = |t|^2`` and ``phase = arg t``
    (principal value here; unwrapped along sweep axes).  ``stable`` mirrors
    the stability verdict of the operating point when known.
    """

    delta: float
    Delta_p: float
    f_val: complex
    a_plus: complex
    a_minus: complex
    b_plus: complex
    b_minus: complex
    Q_plus: complex
    t: complex
    t_sq: float
    phase: float
    stable: bool | None = None


@dataclass(frozen=True)
class FluctuationAmplitudes:
    """All six sideband amplitudes from the linear solve."""

    a_plus: complex
    a_minus: complex
    b_plus: complex
    b_minus: complex
    q_plus: complex
    q_minus: complex


@dataclass(frozen=True)
class DelayResult:
    """Group delay value with the method and differentiation step used."""

    tau_g: float
    method: str
    step: float


def effective_mechanical_denominator(delta, params, ss):
    """f(delta); accepts scalar or array delta."""
    delta = np.asarray(delta, dtype=float) if np.ndim(delta) else delta
    d_o, d_e = ss.Delta_o_eff, ss.Delta_e_eff
    term_o = (2.0 * d_o * params.g_o**2 * ss.n_o
              / ((params.kappa_o - 1j * delta) ** 2 + d_o**2))
    term_e = (2.0 * d_e * params.g_e**2 * ss.n_e
              / ((params.kappa_e - 1j * delta) ** 2 + d_e**2))
    mech = (params.omega_m**2 - delta**2 - 1j * delta * params.gamma_m) / params.omega_m
    return term_o + term_e - mech


def _denominator_derivative(delta, params, ss):
    """df/d(delta), used by the analytic group delay."""
    d_o, d_e = ss.Delta_o_eff, ss.Delta_e_eff
    D_o = (params.kappa_o - 1j * delta) ** 2 + d_o**2
    D_e = (params.kappa_e - 1j * delta) ** 2 + d_e**2
    term_o = (4j * d_o * params.g_o**2 * ss.n_o * (params.kappa_o - 1j * delta) / D_o**2)
    term_e = (4j * d_e * params.g_e**2 * ss.n_e * (params.kappa_e - 1j * delta) / D_e**2)
    return term_o + term_e + (2.0 * delta + 1j * params.gamma_m) / params.omega_m


def probe_sideband_amplitude(delta, params, drive, ss):
    """Closed-form probe-frequency sideband amplitude a_plus.

    Linear in the probe amplitude; zero probe gives zero.  Raises
    :class:`SingularResponseError` at an exact pole of 1/f.
    """
    E_p = drive_amplitudes(params, drive).E_p
    u = params.kappa_o + 1j * ss.Delta_o_eff - 1j * delta
    bare = np.sqrt(params.kappa_o_ext) * E_p / u
    f = effective_mechanical_denominator(delta, params, ss)
    if np.any(f == 0):
        raise SingularResponseError(
            "effective mechanical denominator vanishes", delta=delta)
    return bare - 1j * params.g_o**2 * ss.n_o / f * np.sqrt(params.kappa_o_ext) * E_p / u**2


def _sideband_matrix(delta, params, ss):
    """Coefficient matrix of the sideband system at one detuning.

    Basis: (a_plus, conj(a_minus), b_plus, conj(b_minus), Q_plus, Qdot_plus).
    The displacement row uses the drive coefficient omega_m*g, the
    normalization under which the closed forms above solve this exact
    system (see module docstring).
    """
    k_o, k_e = params.kappa_o, params.kappa_e
    d_o, d_e = ss.Delta_o_eff, ss.Delta_e_eff
    g_o, g_e = params.g_o, params.g_e
    a_s, b_s = ss.a_s, ss.b_s
    A = np.zeros((6, 6), dtype=complex)
    A[0, 0] = k_o + 1j * d_o - 1j * delta
    A[0, 4] = -1j * g_o * a_s
    A[1, 1] = k_o - 1j * d_o - 1j * delta
    A[1, 4] = 1j * g_o * np.conj(a_s)
    A[2, 2] = k_e + 1j * d_e - 1j * delta
    A[2, 4] = -1j * g_e * b_s
    A[3, 3] = k_e - 1j * d_e - 1j * delta
    A[3, 4] = 1j * g_e * np.conj(b_s)
    A[4, 4] = -1j * delta
    A[4, 5] = -1.0
    A[5, 0] = -params.omega_m * g_o * np.conj(a_s)
    A[5, 1] = -params.omega_m * g_o * a_s
    A[5, 2] = -params.omega_m * g_e * np.conj(b_s)
    A[5, 3] = -params.omega_m * g_e * b_s
    A[5, 4] = params.omega_m**2
    A[5, 5] = params.gamma_m - 1j * delta
    return A


def fluctuation_linear_solve(delta, params, drive, ss):
    """Brute-force solve of the 6x6 sideband system.

    Returns all six amplitudes; the displacement reality constraint
    q_minus = conj(q_plus) is built in.  Raises
    :class:`SingularResponseError` when the system is singular (which
    coincides with a pole of 1/f).
    """
    E_p = drive_amplitudes(params, drive).E_p
    A = _sideband_matrix(delta, params, ss)
    rhs = np.zeros(6, dtype=complex)
    rhs[0] = np.sqrt(params.kappa_o_ext) * E_p
    try:
        x = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularResponseError(
            f"sideband system singular at delta = {delta!r}", delta=delta) from exc
    return FluctuationAmplitudes(
        a_plus=x[0], a_minus=np.conj(x[1]),
        b_plus=x[2], b_minus=np.conj(x[3]),
        q_plus=x[4], q_minus=np.conj(x[4]))


def _sideband_solve_batch(deltas, params, drive, ss):
    """Vectorized sideband solve over an array of detunings."""
    E_p = drive_amplitudes(params, drive).E_p
    n = len(deltas)
    A = np.zeros((n, 6, 6), dtype=complex)
    base = _sideband_matrix(0.0, params, ss)
    A[:] = base
    shift = -1j * np.asarray(deltas)
    for i in (0, 1, 2, 3, 4, 5):
        A[:, i, i] = base[i, i] + shift
    rhs = np.zeros((n, 6, 1), dtype=complex)
    rhs[:, 0, 0] = np.sqrt(params.kappa_o_ext) * E_p
    return np.linalg.solve(A, rhs)[..., 0]


def probe_transmission(delta, params, ss):
    """Complex probe transmission t; accepts scalar or array delta.

    Independent of the probe power by construction.  Propagates a
    :class:`SingularResponseError` from a pole of 1/f.
    """
    u = params.kappa_o + 1j * ss.Delta_o_eff - 1j * np.asarray(delta)
    f = effective_mechanical_denominator(delta, params, ss)
    if np.any(f == 0):
        raise SingularResponseError(
            "effective mechanical denominator vanishes", delta=delta)
    t = 1.0 - (params.kappa_o_ext / u
               - 1j * params.g_o**2 * ss.n_o * params.kappa_o_ext / (f * u**2))
    return t if np.ndim(delta) else complex(t)


def _transmission_derivative(delta, params, ss):
    """dt/d(delta) in closed form."""
    u = params.kappa_o + 1j * ss.Delta_o_eff - 1j * delta
    f = effective_mechanical_denominator(delta, params, ss)
    fp = _denominator_derivative(delta, params, ss)
    gn = params.g_o**2 * ss.n_o
    return (-1j * params.kappa_o_ext / u**2
            - 1j * gn * params.kappa_o_ext * (fp * u - 2j * f) / (f**2 * u**3))


def output_field_components(delta, params, drive, ss):
    """Output-field amplitudes at the probe frequency and at the
    four-wave-mixing frequency (2*Omega_o - Omega_p).

    Returns
    -------
    (complex, complex)
        ``E_p - sqrt(kappa_o_ext) * a_plus`` and
        ``-sqrt(kappa_o_ext) * a_minus`` with a_minus from the linear solve.
    """
    E_p = drive_amplitudes(params, drive).E_p
    amps = fluctuation_linear_solve(delta, params, drive, ss)
    root = np.sqrt(params.kappa_o_ext)
    return E_p - root * amps.a_plus, -root * amps.a_minus


def response_point(delta, params, drive, ss, stable=None):
    """Full :class:`ResponsePoint` at one detuning (phase is principal value)."""
    amps = fluctuation_linear_solve(delta, params, drive, ss)
    t = probe_transmission(delta, params, ss)
    return ResponsePoint(
        delta=float(delta),
        Delta_p=float(probe_detuning(delta, drive.Delta_o)),
        f_val=complex(effective_mechanical_denominator(delta, params, ss)),
        a_plus=complex(probe_sideband_amplitude(delta, params, drive, ss)),
        a_minus=amps.a_minus, b_plus=amps.b_plus, b_minus=amps.b_minus,
        Q_plus=amps.q_plus,
        t=t, t_sq=abs(t) ** 2, phase=float(np.angle(t)), stable=stable)


DEFAULT_DELAY_STEP_FRACTION = 0.01  # finite-difference step = gamma_m/100


def group_delay(params, drive, ss, method="analytic", step=None):
    """Group delay tau_g = d(arg t)/d(Omega_p) at the cavity resonance
    (Delta_p = 0, i.e. delta = Delta_o).

    Parameters
    ----------
    method : str
        ``analytic`` differentiates the closed-form transmission;
        ``finite-difference`` uses central differences of the phase with
        one Richardson extrapolation step.
    step : float, optional
        Finite-difference step, rad/s (default gamma_m/100).  Recorded in
        the result for both methods.

    Raises
    ------
    DelayError
        If the transmission magnitude (nearly) vanishes within the stencil,
        where the phase is discontinuous and the delay ill conditioned.
    """
    delta0 = drive.Delta_o
    h = step if step is not None else DEFAULT_DELAY_STEP_FRACTION * params.gamma_m
    stencil = [delta0 - h, delta0 - h / 2, delta0, delta0 + h / 2, delta0 + h]
    tvals = [probe_transmission(d, params, ss) for d in stencil]
    tmax = max(abs(t) for t in tvals)
    if tmax == 0 or min(abs(t) for t in tvals) < 1e-6 * tmax:
        raise DelayError(
            "transmission magnitude vanishes within the stencil; "
            "phase slope undefined at a perfect-absorption crossing")
    if any(abs(np.angle(tvals[i + 1] / tvals[i])) > np.pi / 2
           for i in range(len(tvals) - 1)):
        raise DelayError(
            "phase discontinuity within the stencil; the delay is "
            "ill conditioned here")
    if method == "analytic":
        tau = (_transmission_derivative(delta0, params, ss) / tvals[2]).imag
    elif method == "finite-difference":
        # phase increments via angles of ratios: immune to branch cuts
        d1 = np.angle(tvals[4] / tvals[0]) / (2 * h)
        d2 = np.angle(tvals[3] / tvals[1]) / h
        tau = (4.0 * d2 - d1) / 3.0
    else:
        raise ValueError(f"unknown method {method!r}")
    return DelayResult(tau_g=float(tau), method=method, step=float(h))
