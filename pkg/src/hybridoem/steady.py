"""Classical steady state of the driven two-cavity system.

The intracavity photon numbers obey the coupled equations

    n_o = kappa_o_ext * E_o^2 / (kappa_o^2 + (Delta_o - g_o*Q_s)^2)
    n_e = kappa_e_ext * E_e^2 / (kappa_e^2 + (Delta_e - g_e*Q_s)^2)

with the static displacement Q_s = (2/omega_m) * (g_o*n_o + g_e*n_e), i.e.
each cavity's effective detuning is pulled by the radiation-pressure shift
of the shared mechanical resonator.  The solver is a damped fixed-point
iteration with a Newton fallback; distinct multistart roots raise the
``multistable`` flag instead of being silently collapsed.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, SolverError
from .model import drive_amplitudes

__all__ = [
    "SolverOptions",
    "SteadyState",
    "photon_number_fixed_point",
    "steady_state_fields",
    "solve_steady_state",
]

#: Converged roots further apart than this multiple of the tolerance are
#: treated as distinct branches.
MULTISTABLE_SEPARATION = 1e3


@dataclass(frozen=True)
class SolverOptions:
    """Controls for the photon-number fixed point.

    ``damping`` in (0, 1] blends old and new iterates; ``tol`` is the
    relative residual target; ``seeds`` caps how many multistart seeds are
    tried (continuation seed, zero, undetuned estimate, in that order).
    """

    damping: float = 0.5
    tol: float = 1e-12
    max_iter: int = 100000
    seeds: int = 3

    def __post_init__(self):
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.seeds < 1:
            raise ValueError("seeds must be >= 1")


@dataclass(frozen=True)
class SteadyState:
    """Full classical operating point.

    ``n_o``/``n_e`` are mean intracavity photon numbers, ``Q_s`` the static
    dimensionless displacement, ``a_s``/``b_s`` the complex steady field
    amplitudes, and ``Delta_o_eff``/``Delta_e_eff`` the radiation-pressure
    shifted detunings Delta' = Delta - g*Q_s.  For solver-produced states
    Q_s equals (2/omega_m)*(g_o*n_o + g_e*n_e) exactly; states estimated by
    time-domain evolution may deviate within the settling tolerance.
    ``residual`` is the largest relative photon-number residual.
    """

    n_o: float
    n_e: float
    Q_s: float
    a_s: complex
    b_s: complex
    Delta_o_eff: float
    Delta_e_eff: float
    residual: float
    multistable: bool = False


def _photon_map(n, params, drive, E_o, E_e):
    """One application of the coupled photon-number map F(n)."""
    n_o, n_e = n
    Q_s = 2.0 / params.omega_m * (params.g_o * n_o + params.g_e * n_e)
    d_o = drive.Delta_o - params.g_o * Q_s
    d_e = drive.Delta_e - params.g_e * Q_s
    F_o = params.kappa_o_ext * E_o**2 / (params.kappa_o**2 + d_o**2)
    F_e = params.kappa_e_ext * E_e**2 / (params.kappa_e**2 + d_e**2)
    return np.array([F_o, F_e])


def _photon_map_jacobian(n, params, drive, E_o, E_e):
    """Analytic Jacobian dF/dn of the photon-number map."""
    n_o, n_e = n
    Q_s = 2.0 / params.omega_m * (params.g_o * n_o + params.g_e * n_e)
    d_o = drive.Delta_o - params.g_o * Q_s
    d_e = drive.Delta_e - params.g_e * Q_s
    den_o = params.kappa_o**2 + d_o**2
    den_e = params.kappa_e**2 + d_e**2
    F_o = params.kappa_o_ext * E_o**2 / den_o
    F_e = params.kappa_e_ext * E_e**2 / den_e
    # dd_o/dn_j = -2 g_o g_j / omega_m
    pref_o = 4.0 * F_o * d_o * params.g_o / (params.omega_m * den_o)
    pref_e = 4.0 * F_e * d_e * params.g_e / (params.omega_m * den_e)
    return np.array([
        [pref_o * params.g_o, pref_o * params.g_e],
        [pref_e * params.g_o, pref_e * params.g_e],
    ])


def _residual(n, F):
    return max(abs(n[0] - F[0]) / max(n[0], 1.0), abs(n[1] - F[1]) / max(n[1], 1.0))


def _solve_from_seed(seed, params, drive, E_o, E_e, opts):
    """Damped iteration from one seed, switching to Newton if it crawls.

    Returns (n, residual) or None if this seed fails to converge.
    """
    n = np.array(seed, dtype=float)
    newton_after = min(500, max(50, opts.max_iter // 10))
    it = 0
    while it < opts.max_iter:
        F = _photon_map(n, params, drive, E_o, E_e)
        res = _residual(n, F)
        if res <= opts.tol:
            return n, res
        if it >= newton_after:
            n_newton = _newton_polish(n, params, drive, E_o, E_e, opts)
            if n_newton is not None:
                return n_newton
        n = (1.0 - opts.damping) * n + opts.damping * F
        if not np.all(np.isfinite(n)):
            return None
        it += 1
    return None


def _newton_polish(n0, params, drive, E_o, E_e, opts, max_steps=50):
    """Newton iteration on G(n) = n - F(n); None on failure."""
    n = n0.copy()
    eye = np.eye(2)
    for _ in range(max_steps):
        F = _photon_map(n, params, drive, E_o, E_e)
        res = _residual(n, F)
        if res <= opts.tol:
            return n, res
        J = eye - _photon_map_jacobian(n, params, drive, E_o, E_e)
        try:
            step = np.linalg.solve(J, n - F)
        except np.linalg.LinAlgError:
            return None
        n_new = n - step
        if not np.all(np.isfinite(n_new)) or np.any(n_new < 0):
            return None
        n = n_new
    return None


def photon_number_fixed_point(params, drive, opts=None, seed=None):
    """Solve the coupled photon-number equations.

    Parameters
    ----------
    params, drive : SystemParams, DriveConfig
    opts : SolverOptions, optional
    seed : (float, float), optional
        Continuation seed (previous sweep point).  When given, the root it
        converges to is reported as primary.

    Returns
    -------
    (n_o, n_e, multistable) : (float, float, bool)
        Photon numbers with both relative residuals <= ``opts.tol``;
        ``multistable`` is set when distinct multistart roots are found.

    Raises
    ------
    SolverError
        If no seed converges within ``opts.max_iter`` iterations.
    """
    opts = opts or SolverOptions()
    amps = drive_amplitudes(params, drive)
    E_o, E_e = amps.E_o, amps.E_e
    if E_o == 0.0 and E_e == 0.0:
        return 0.0, 0.0, False

    # Undetuned estimate ignores both detuning and back-action.
    est = (params.kappa_o_ext * E_o**2 / params.kappa_o**2,
           params.kappa_e_ext * E_e**2 / params.kappa_e**2)
    seeds = []
    if seed is not None:
        seeds.append(tuple(seed))
    seeds.extend([(0.0, 0.0), est])
    seeds = seeds[: opts.seeds]

    roots = []
    for s in seeds:
        out = _solve_from_seed(s, params, drive, E_o, E_e, opts)
        if out is not None:
            roots.append(out)
    if not roots:
        # rerun the first seed to expose the last iterate
        n = np.array(seeds[0], dtype=float)
        for _ in range(opts.max_iter):
            F = _photon_map(n, params, drive, E_o, E_e)
            n = (1.0 - opts.damping) * n + opts.damping * F
        res = _residual(n, _photon_map(n, params, drive, E_o, E_e))
        raise SolverError(
            f"photon-number fixed point did not converge "
            f"(residual {res:.3e} after {opts.max_iter} iterations)",
            last_iterate=tuple(n), residual=res)

    primary, res = roots[0]
    multistable = False
    for other, _ in roots[1:]:
        sep = max(abs(other[0] - primary[0]) / max(primary[0], 1.0),
                  abs(other[1] - primary[1]) / max(primary[1], 1.0))
        if sep > MULTISTABLE_SEPARATION * opts.tol:
            multistable = True
    return float(primary[0]), float(primary[1]), multistable


def steady_state_fields(params, drive, n_o, n_e, multistable=False):
    """Assemble the full steady state from converged photon numbers.

    Raises :class:`ConsistencyError` if |a_s|^2 deviates from n_o (or the
    microwave analogue) by more than 1e-6 relative, which indicates the
    photon numbers were not a fixed point of the coupled equations.
    """
    amps = drive_amplitudes(params, drive)
    Q_s = 2.0 / params.omega_m * (params.g_o * n_o + params.g_e * n_e)
    d_o = drive.Delta_o - params.g_o * Q_s
    d_e = drive.Delta_e - params.g_e * Q_s
    a_s = np.sqrt(params.kappa_o_ext) * amps.E_o / (params.kappa_o + 1j * d_o)
    b_s = np.sqrt(params.kappa_e_ext) * amps.E_e / (params.kappa_e + 1j * d_e)
    res = _residual(np.array([n_o, n_e]),
                    np.array([abs(a_s) ** 2, abs(b_s) ** 2]))
    if res > 1e-6:
        raise ConsistencyError(
            f"|a_s|^2 deviates from n_o by {res:.3e} relative; "
            "inputs are not a steady-state solution")
    return SteadyState(n_o=n_o, n_e=n_e, Q_s=Q_s, a_s=a_s, b_s=b_s,
                       Delta_o_eff=d_o, Delta_e_eff=d_e,
                       residual=res, multistable=multistable)


def solve_steady_state(params, drive, opts=None, seed=None):
    """Fixed-point solve followed by field assembly (the usual entry point)."""
    n_o, n_e, multistable = photon_number_fixed_point(params, drive, opts, seed)
    return steady_state_fields(params, drive, n_o, n_e, multistable)
