"""Time-domain mean-field evolution to steady state.

Integrates the deterministic (noise-free) equations of motion

    da/dt = -(kappa_o + i*(Delta_o - g_o*Q)) a + sqrt(kappa_o_ext) E_o
    db/dt = -(kappa_e + i*(Delta_e - g_e*Q)) b + sqrt(kappa_e_ext) E_e
    d2Q/dt2 + gamma_m dQ/dt + omega_m^2 Q = 2*omega_m*(g_o|a|^2 + g_e|b|^2)

from the vacuum initial condition with the probe off, using an adaptive
Dormand-Prince 5(4) stepper compiled with numba.  This is an independent
route to the operating point and serves as the reference the fixed-point
solver is validated against: they must agree wherever the point is
dynamically stable.

The state is sampled once per mechanical period; the run stops when every
component's change per period drops below ``settle_tol`` relative to that
component's dynamic range, when the trajectory diverges past a scale-aware
bound, when it stops decaying altogether, or when it exhausts the time
budget.  The decay check compares maxima of the per-period change
over consecutive windows of ``_WINDOW`` periods: an exponentially growing
deviation or a saturated limit cycle keeps the envelope from decaying and
is reported as an instability.  Operating points with |effective damping|
below roughly 2*``_DECAY_MARGIN``/(window duration) (a few rad/s here) sit
in the gray zone of that test and may need a larger window.
"""

import numpy as np
from numba import njit

from .errors import InstabilityError, SettleTimeoutError
from .model import drive_amplitudes
from .steady import SteadyState

__all__ = ["mean_field_steady_state", "mean_field_settles"]

_SETTLED, _TIMEOUT, _DIVERGED, _NOT_DECAYING = 0, 1, 2, 3

#: samples (mechanical periods) per decay-check window
_WINDOW = 256
#: required fractional decay of the change envelope per window
_DECAY_MARGIN = 1e-4


@njit(cache=True)
def _rhs(y, cpars):
    kappa_o = cpars[0].real
    kappa_e = cpars[1].real
    sko = cpars[2].real
    ske = cpars[3].real
    g_o = cpars[4].real
    g_e = cpars[5].real
    omega_m = cpars[6].real
    gamma_m = cpars[7].real
    Delta_o = cpars[8].real
    Delta_e = cpars[9].real
    E_o = cpars[10].real
    E_e = cpars[11].real
    a, b = y[0], y[1]
    Q, P = y[2].real, y[3].real
    out = np.empty(4, dtype=np.complex128)
    out[0] = -(kappa_o + 1j * (Delta_o - g_o * Q)) * a + sko * E_o
    out[1] = -(kappa_e + 1j * (Delta_e - g_e * Q)) * b + ske * E_e
    out[2] = P
    out[3] = (-omega_m * omega_m * Q - gamma_m * P
              + 2.0 * omega_m * (g_o * (a.real ** 2 + a.imag ** 2)
                                 + g_e * (b.real ** 2 + b.imag ** 2)))
    return out


@njit(cache=True)
def _integrate(cpars, t_max, rtol, settle_tol, period, grow_limit, max_step,
               window, decay_margin):
    """Dormand-Prince 5(4) with PI-free step control and period sampling."""
    a21 = 0.2
    a31, a32 = 3.0 / 40.0, 9.0 / 40.0
    a41, a42, a43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
    a51, a52, a53, a54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
    a61, a62, a63, a64, a65 = (9017.0 / 3168.0, -355.0 / 33.0,
                               46732.0 / 5247.0, 49.0 / 176.0,
                               -5103.0 / 18656.0)
    b1, b3, b4, b5, b6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                          -2187.0 / 6784.0, 11.0 / 84.0)
    e1, e3, e4, e5, e6, e7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                              -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

    omega_m = cpars[6].real
    y = np.zeros(4, dtype=np.complex128)
    prev = np.zeros(4, dtype=np.complex128)
    t = 0.0
    h = min(1e-3 / max(omega_m, 1.0), max_step)
    k1 = _rhs(y, cpars)
    next_sample = period
    status = _TIMEOUT
    cur_max = 0.0
    prev_max = -1.0
    in_window = 0
    scales = np.zeros(4)
    while t < t_max:
        if h > max_step:
            h = max_step
        if h > next_sample - t:
            h = next_sample - t
        k2 = _rhs(y + h * (a21 * k1), cpars)
        k3 = _rhs(y + h * (a31 * k1 + a32 * k2), cpars)
        k4 = _rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3), cpars)
        k5 = _rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), cpars)
        k6 = _rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), cpars)
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6)
        k7 = _rhs(ynew, cpars)
        errv = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)
        err = 0.0
        for i in range(4):
            sc = rtol * (abs(y[i]) + abs(ynew[i]) + 1.0)
            e = abs(errv[i]) / sc
            if e > err:
                err = e
        if err <= 1.0:
            t += h
            y = ynew
            k1 = k7
            # scale-aware norm: weight the momentum by 1/omega_m
            nrm = abs(y[0]) + abs(y[1]) + abs(y[2]) + abs(y[3]) / omega_m
            if nrm > grow_limit:
                status = _DIVERGED
                break
            if t >= next_sample - 1e-12 * period:
                # per-component change against the component's dynamic range
                d = 0.0
                floor = 0.0
                settled = True
                for i in range(4):
                    w = 1.0 / omega_m if i == 3 else 1.0
                    mag = w * abs(y[i])
                    if mag > scales[i]:
                        scales[i] = mag
                    di = w * abs(y[i] - prev[i])
                    fi = settle_tol * (scales[i] + 1.0)
                    if di > fi:
                        settled = False
                    d += di
                    floor += fi
                if settled:
                    status = _SETTLED
                    break
                if d > cur_max:
                    cur_max = d
                in_window += 1
                if in_window == window:
                    # envelope of the per-period change must keep decaying
                    if (prev_max >= 0.0 and cur_max > 1e3 * floor
                            and cur_max >= prev_max * (1.0 - decay_margin)):
                        status = _NOT_DECAYING
                        break
                    prev_max = cur_max
                    cur_max = 0.0
                    in_window = 0
                for i in range(4):
                    prev[i] = y[i]
                next_sample = t + period
        fac = 5.0
        if err > 1e-10:
            fac = 0.9 * err ** -0.2
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
        h *= fac
    return y, t, status


def _run(params, drive, t_max, rtol, settle_tol, max_step):
    amps = drive_amplitudes(params, drive)
    cpars = np.array([
        params.kappa_o, params.kappa_e,
        np.sqrt(params.kappa_o_ext), np.sqrt(params.kappa_e_ext),
        params.g_o, params.g_e, params.omega_m, params.gamma_m,
        drive.Delta_o, drive.Delta_e, amps.E_o, amps.E_e,
    ], dtype=np.complex128)
    # Divergence bound: far above any transient of a stable trajectory,
    # measured against the no-back-action photon-number estimates.
    n_o_est = params.kappa_o_ext * amps.E_o**2 / params.kappa_o**2
    n_e_est = params.kappa_e_ext * amps.E_e**2 / params.kappa_e**2
    q_est = 2.0 / params.omega_m * (params.g_o * n_o_est + params.g_e * n_e_est)
    scale = np.sqrt(n_o_est) + np.sqrt(n_e_est) + abs(q_est)
    grow_limit = 100.0 * (scale + 1.0)
    if max_step is None:
        max_step = 2.0 * np.pi / params.omega_m
    period = 2.0 * np.pi / params.omega_m
    return _integrate(cpars, t_max, rtol, settle_tol, period, grow_limit,
                      max_step, _WINDOW, _DECAY_MARGIN)


def mean_field_steady_state(params, drive, t_max=0.05, rtol=1e-8,
                            settle_tol=1e-10, max_step=None):
    """Evolve the mean-field equations from vacuum and return the settled state.

    Parameters
    ----------
    params, drive : SystemParams, DriveConfig
        The probe is ignored (evolution runs with E_p = 0).
    t_max : float
        Simulated-time budget, s.
    rtol : float
        Local error tolerance of the adaptive stepper.
    settle_tol : float
        Relative change per mechanical period below which the trajectory
        counts as settled.
    max_step : float, optional
        Step-size cap, s; defaults to one mechanical period.

    Returns
    -------
    SteadyState
        Estimate assembled from the trajectory endpoint (``Q_s`` is the
        integrated displacement, not the reconstruction from the photon
        numbers; ``residual`` holds the final per-period change).

    Raises
    ------
    InstabilityError
        If the trajectory norm grows past the divergence bound.
    SettleTimeoutError
        If the trajectory neither settles nor diverges within ``t_max``.
    """
    y, t, status = _run(params, drive, t_max, rtol, settle_tol, max_step)
    state = tuple(y)
    if status == _DIVERGED:
        raise InstabilityError(
            f"mean-field trajectory diverged at t = {t:.3e} s "
            "(dynamically unstable operating point)", state=state, time=t)
    if status == _NOT_DECAYING:
        raise InstabilityError(
            f"mean-field trajectory stopped decaying at t = {t:.3e} s "
            "(growing deviation or limit cycle; dynamically unstable "
            "operating point)", state=state, time=t)
    if status == _TIMEOUT:
        raise SettleTimeoutError(
            f"mean-field trajectory not settled after {t:.3e} s",
            state=state, time=t)
    a, b = y[0], y[1]
    Q = y[2].real
    n_o = abs(a) ** 2
    n_e = abs(b) ** 2
    return SteadyState(
        n_o=n_o, n_e=n_e, Q_s=Q, a_s=a, b_s=b,
        Delta_o_eff=drive.Delta_o - params.g_o * Q,
        Delta_e_eff=drive.Delta_e - params.g_e * Q,
        residual=float(settle_tol), multistable=False)


def mean_field_settles(params, drive, t_max=0.05, rtol=1e-8, settle_tol=1e-10):
    """True if the trajectory settles, False if it diverges or times out.

    Convenience wrapper used to cross-validate the linear stability verdict.
    """
    _, _, status = _run(params, drive, t_max, rtol, settle_tol, None)
    return status == _SETTLED
