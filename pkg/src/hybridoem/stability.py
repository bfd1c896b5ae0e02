"""Dynamical stability of the linearized fluctuation equations.

The drift matrix propagates (da, da*, db, db*, dQ, dQdot) around a steady
state, with the full quadrature equation of motion for the displacement:

    dQ'' = -omega_m^2 dQ - gamma_m dQ' + 2 omega_m g_o (a_s* da + a_s da*)
                                       + 2 omega_m g_e (b_s* db + b_s db*).

An operating point is stable iff every eigenvalue has a negative real part;
the margin is the largest real part.  Blue-sideband pumping reduces the
effective mechanical damping and drives the margin positive once the pump
anti-damping exceeds the combined mechanical and red-pump damping.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import SolverError
from .model import with_power
from .steady import solve_steady_state

__all__ = [
    "StabilityReport",
    "linear_dynamics_matrix",
    "assess_stability",
    "find_instability_power",
]


@dataclass(frozen=True)
class StabilityReport:
    """Eigenvalues of the drift matrix and the derived verdict."""

    margin: float
    stable: bool
    eigenvalues: np.ndarray


def linear_dynamics_matrix(params, ss):
    """6x6 drift matrix over (da, da*, db, db*, dQ, dQdot)."""
    k_o, k_e = params.kappa_o, params.kappa_e
    d_o, d_e = ss.Delta_o_eff, ss.Delta_e_eff
    g_o, g_e = params.g_o, params.g_e
    a_s, b_s = ss.a_s, ss.b_s
    w_m = params.omega_m
    A = np.zeros((6, 6), dtype=complex)
    A[0, 0] = -(k_o + 1j * d_o)
    A[0, 4] = 1j * g_o * a_s
    A[1, 1] = -(k_o - 1j * d_o)
    A[1, 4] = -1j * g_o * np.conj(a_s)
    A[2, 2] = -(k_e + 1j * d_e)
    A[2, 4] = 1j * g_e * b_s
    A[3, 3] = -(k_e - 1j * d_e)
    A[3, 4] = -1j * g_e * np.conj(b_s)
    A[4, 5] = 1.0
    A[5, 0] = 2.0 * w_m * g_o * np.conj(a_s)
    A[5, 1] = 2.0 * w_m * g_o * a_s
    A[5, 2] = 2.0 * w_m * g_e * np.conj(b_s)
    A[5, 3] = 2.0 * w_m * g_e * b_s
    A[5, 4] = -w_m**2
    A[5, 5] = -params.gamma_m
    return A


def assess_stability(params, ss):
    """Eigenvalue verdict for one operating point.

    Returns a :class:`StabilityReport`; raises :class:`SolverError` if the
    eigenvalue iteration fails to converge (rare for 6x6 systems).
    """
    A = linear_dynamics_matrix(params, ss)
    try:
        eigs = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigenvalue solve failed for drift matrix:\n{A!r}") from exc
    margin = float(eigs.real.max())
    return StabilityReport(margin=margin, stable=margin < 0.0, eigenvalues=eigs)


def stability_margin(params, drive, seed=None):
    """Margin at the steady state of a drive configuration (helper)."""
    ss = solve_steady_state(params, drive, seed=seed)
    return assess_stability(params, ss).margin


def find_instability_power(params, drive_template, p_low, p_high, rtol=0.01):
    """Optical pump power at which the stability margin changes sign.

    Brackets the sign change of the margin between ``p_low`` and ``p_high``
    (W) and refines it to ``rtol`` relative in power.  Raises ValueError if
    the margin does not change sign over the bracket.
    """
    def margin_at(P):
        return stability_margin(params, with_power(drive_template, P_o=P))

    m_low, m_high = margin_at(p_low), margin_at(p_high)
    if m_low * m_high > 0:
        raise ValueError(
            f"stability margin does not change sign on [{p_low!r}, {p_high!r}] W")
    return brentq(margin_at, p_low, p_high, rtol=rtol)
