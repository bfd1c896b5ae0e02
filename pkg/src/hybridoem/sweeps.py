"""Spectrum sweeps, power scans, and regime classification.

A spectrum is one steady-state solve followed by per-point response
evaluation over a probe-cavity detuning axis; a power scan walks the
optical pump power with continuation-seeded steady states and records the
resonant transmission and stability margin.  The classifier maps a
spectrum onto one of four regimes:

    BARE           plain cavity response
    EIT            transparency window between two absorption dips
    EIA            resonant transmission pushed below the bare floor
    AMPLIFICATION  transmission exceeding unity anywhere

Point evaluation is pure, so spectra may be computed chunk-parallel; the
environment variable HYBRIDOEM_THREADS caps the worker count (0 = auto).
Outputs are deterministic regardless of the thread count.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import CoverageError, HybridOEMError
from .model import probe_detuning, pump_beat_detuning
from .response import (ResponsePoint, effective_mechanical_denominator,
                       probe_sideband_amplitude, probe_transmission,
                       _sideband_solve_batch)
from .stability import assess_stability
from .steady import solve_steady_state

__all__ = [
    "AxisSpec",
    "Spectrum",
    "RegimeLabel",
    "PowerScan",
    "BARE", "EIT", "EIA", "AMPLIFICATION",
    "spectrum_axis",
    "mechanical_window_axis",
    "spectrum_sweep",
    "power_sweep",
    "classify_regime",
    "find_peak_transmission",
]

BARE = "BARE"
EIT = "EIT"
EIA = "EIA"
AMPLIFICATION = "AMPLIFICATION"

#: Relative margin by which the centre value must clear the bare reference.
CLASSIFY_MARGIN = 0.05
#: Half width (units of kappa_o) of the window around Delta_p = 0 searched
#: for the centre feature; the static radiation-pressure shift displaces
#: the feature from exact resonance by a small fraction of kappa_o.
NEAR_CENTER_FRACTION = 0.05
#: |t| threshold (relative to the spectrum maximum) marking a
#: perfect-absorption crossing, annotated rather than treated as an error.
ZERO_CROSSING_FRACTION = 1e-6


@dataclass(frozen=True)
class AxisSpec:
    """Probe-cavity detuning axis: ``count`` points on [lo, hi] (rad/s)."""

    lo: float
    hi: float
    count: int = 2001

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("axis needs at least 2 points")
        if not self.hi > self.lo:
            raise ValueError("axis upper bound must exceed lower bound")

    def values(self):
        return np.linspace(self.lo, self.hi, self.count)


def spectrum_axis(params, halfspan_kappa=3.0, count=2001):
    """Default cavity-scale axis, +-``halfspan_kappa``*kappa_o around resonance."""
    w = halfspan_kappa * params.kappa_o
    return AxisSpec(-w, w, count)


def mechanical_window_axis(params, ss, count=2001):
    """Narrow axis resolving the mechanical feature near resonance.

    The half width follows the pump-broadened mechanical scale
    gamma_m + g_o^2 n_o / kappa_o + g_e^2 n_e / kappa_e.
    """
    width = (params.gamma_m
             + params.g_o**2 * ss.n_o / params.kappa_o
             + params.g_e**2 * ss.n_e / params.kappa_e)
    w = 25.0 * width
    return AxisSpec(-w, w, count)


@dataclass
class Spectrum:
    """Probe response along a detuning axis.

    ``axis`` is strictly increasing probe-cavity detuning (rad/s) with one
    :class:`ResponsePoint` per value (phases unwrapped in axis order);
    ``zero_crossings`` lists indices where |t| drops below
    ``ZERO_CROSSING_FRACTION`` of the spectrum maximum (phase jumps by pi
    there).
    """

    axis: np.ndarray
    points: list
    steady: object
    stability: object
    params: object
    drive: object
    zero_crossings: list

    @property
    def t_sq(self):
        return np.array([p.t_sq for p in self.points])

    @property
    def phase(self):
        return np.array([p.phase for p in self.points])


@dataclass(frozen=True)
class RegimeLabel:
    """Classification verdict plus the metrics it was derived from.

    ``width`` is the half-prominence width of the centre feature (rad/s,
    NaN when the feature does not close within the axis).
    """

    label: str
    center_t_sq: float
    bare_reference: float
    max_t_sq: float
    width: float


@dataclass
class PowerScan:
    """Resonant (Delta_p = 0) transmission versus optical pump power.

    ``threshold`` is the first power where |t(0)|^2 crosses unity (None when
    the scan never crosses); ``failures`` maps power indices to solver error
    messages for points that could not be solved.
    """

    powers: np.ndarray
    t_sq_peak: np.ndarray
    margins: np.ndarray
    threshold: float | None
    failures: dict


def _thread_count(n_points):
    raw = os.environ.get("HYBRIDOEM_THREADS", "0")
    try:
        threads = int(raw)
    except ValueError:
        threads = 0
    if threads <= 0:
        threads = os.cpu_count() or 1
    return max(1, min(threads, n_points))


def spectrum_sweep(params, drive, axis=None):
    """Evaluate the probe response across a probe-cavity detuning axis.

    One steady-state solve, then chunk-parallel point evaluation; the phase
    column is unwrapped along the axis.  Unstable operating points still
    produce a spectrum, flagged through ``stability`` and the per-point
    ``stable`` field.
    """
    axis = axis or spectrum_axis(params)
    dp = axis.values()
    ss = solve_steady_state(params, drive)
    report = assess_stability(params, ss)
    deltas = pump_beat_detuning(dp, drive.Delta_o)

    def eval_chunk(sl):
        d = deltas[sl]
        t = probe_transmission(d, params, ss)
        f = effective_mechanical_denominator(d, params, ss)
        a_plus = probe_sideband_amplitude(d, params, drive, ss)
        x = _sideband_solve_batch(d, params, drive, ss)
        return sl, t, f, a_plus, x

    n = len(dp)
    threads = _thread_count(n)
    # fixed chunk size: slicing never depends on the thread count
    chunk = 512
    chunks = [slice(i, min(i + chunk, n)) for i in range(0, n, chunk)]
    t_arr = np.empty(n, dtype=complex)
    f_arr = np.empty(n, dtype=complex)
    ap_arr = np.empty(n, dtype=complex)
    x_arr = np.empty((n, 6), dtype=complex)
    if threads == 1:
        results = [eval_chunk(sl) for sl in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(eval_chunk, chunks))
    for sl, t, f, a_plus, x in results:
        t_arr[sl] = t
        f_arr[sl] = f
        ap_arr[sl] = a_plus
        x_arr[sl] = x

    phase = np.unwrap(np.angle(t_arr))
    t_sq = np.abs(t_arr) ** 2
    tmax = np.sqrt(t_sq.max())
    zero_crossings = (np.flatnonzero(np.abs(t_arr) < ZERO_CROSSING_FRACTION * tmax).tolist()
                      if tmax > 0 else [])
    points = [
        ResponsePoint(
            delta=float(deltas[i]), Delta_p=float(dp[i]), f_val=complex(f_arr[i]),
            a_plus=complex(ap_arr[i]), a_minus=complex(np.conj(x_arr[i, 1])),
            b_plus=complex(x_arr[i, 2]), b_minus=complex(np.conj(x_arr[i, 3])),
            Q_plus=complex(x_arr[i, 4]), t=complex(t_arr[i]),
            t_sq=float(t_sq[i]), phase=float(phase[i]), stable=report.stable)
        for i in range(n)
    ]
    return Spectrum(axis=dp, points=points, steady=ss, stability=report,
                    params=params, drive=drive, zero_crossings=zero_crossings)


def _center_transmission(params, drive, seed=None):
    """|t|^2 at Delta_p = 0 plus the stability margin, for power scans."""
    ss = solve_steady_state(params, drive, seed=seed)
    t = probe_transmission(pump_beat_detuning(0.0, drive.Delta_o), params, ss)
    return abs(t) ** 2, assess_stability(params, ss).margin, ss


def power_sweep(params, drive_template, powers, refine_threshold=True):
    """Resonant transmission versus optical pump power.

    ``powers`` must be strictly increasing (W).  Steady states are
    continuation-seeded in ascending order; per-point solver failures are
    recorded and the scan continues.  When |t(0)|^2 crosses unity between
    two consecutive points the crossing is refined by root bracketing to
    well under 1% in power.
    """
    powers = np.asarray(powers, dtype=float)
    if powers.ndim != 1 or len(powers) == 0:
        raise ValueError("powers must be a nonempty 1-d sequence")
    if np.any(np.diff(powers) <= 0):
        raise ValueError("powers must be strictly increasing")
    t_sq = np.full(len(powers), np.nan)
    margins = np.full(len(powers), np.nan)
    failures = {}
    seed = None
    for i, P in enumerate(powers):
        drive = replace(drive_template, P_o=float(P))
        try:
            t2, margin, ss = _center_transmission(params, drive, seed=seed)
        except HybridOEMError as exc:
            failures[i] = str(exc)
            continue
        t_sq[i] = t2
        margins[i] = margin
        seed = (ss.n_o, ss.n_e)

    threshold = None
    valid = np.flatnonzero(np.isfinite(t_sq))
    for a, b in zip(valid[:-1], valid[1:]):
        if (t_sq[a] - 1.0) * (t_sq[b] - 1.0) < 0:
            if refine_threshold:
                def gain_excess(P):
                    t2, _, _ = _center_transmission(
                        params, replace(drive_template, P_o=float(P)))
                    return t2 - 1.0
                threshold = float(brentq(gain_excess, powers[a], powers[b],
                                         rtol=1e-4))
            else:
                # linear interpolation between the bracketing samples
                frac = (1.0 - t_sq[a]) / (t_sq[b] - t_sq[a])
                threshold = float(powers[a] + frac * (powers[b] - powers[a]))
            break
    return PowerScan(powers=powers, t_sq_peak=t_sq, margins=margins,
                     threshold=threshold, failures=failures)


def _feature_width(axis, t_sq, ic, level):
    """Width of the centre feature at ``level``, linear interpolation."""
    def cross(direction):
        i = ic
        while 0 < i + direction < len(t_sq) - (direction > 0):
            j = i + direction
            if (t_sq[i] - level) * (t_sq[j] - level) <= 0 and t_sq[i] != t_sq[j]:
                frac = (level - t_sq[i]) / (t_sq[j] - t_sq[i])
                return axis[i] + frac * (axis[j] - axis[i])
            i = j
        return None

    left, right = cross(-1), cross(+1)
    if left is None or right is None:
        return float("nan")
    return float(right - left)


def classify_regime(spectrum):
    """Label a spectrum as BARE, EIT, EIA, or AMPLIFICATION.

    Rules (precedence AMPLIFICATION > EIA > EIT > BARE):

    * AMPLIFICATION: max |t|^2 > 1 anywhere on the axis.
    * EIA: centre value at least 5% below the bare reference
      (1 - kappa_o_ext/kappa_o)^2.
    * EIT: centre value at least 5% above the bare reference, an interior
      local maximum within 0.05*kappa_o of the centre (the static
      radiation-pressure shift displaces the window slightly from exact
      resonance), and interior minima on both sides at or below the bare
      reference plus the same 5% tolerance.  (The exact response leaves the
      flanking dips marginally above the bare floor, so the tolerance is
      applied on both sides.)
    * BARE otherwise.

    Requires the axis to cover at least [-3 kappa_o, +3 kappa_o].
    """
    params = spectrum.params
    axis = spectrum.axis
    slack = 1e-9 * params.kappa_o
    if axis[0] > -3.0 * params.kappa_o + slack or axis[-1] < 3.0 * params.kappa_o - slack:
        raise CoverageError(
            "classification requires axis coverage of [-3*kappa_o, +3*kappa_o]")
    t_sq = spectrum.t_sq
    ic = int(np.argmin(np.abs(axis)))
    bare_ref = (1.0 - params.kappa_o_ext / params.kappa_o) ** 2
    t0 = float(t_sq[ic])
    tmax = float(t_sq.max())

    label = BARE
    if tmax > 1.0:
        label = AMPLIFICATION
    elif t0 < (1.0 - CLASSIFY_MARGIN) * bare_ref:
        label = EIA
    elif t0 > (1.0 + CLASSIFY_MARGIN) * bare_ref:
        near = np.abs(axis) <= NEAR_CENTER_FRACTION * params.kappa_o
        im = int(np.flatnonzero(near)[np.argmax(t_sq[near])])
        interior_max = (0 < im < len(t_sq) - 1
                        and t_sq[im] >= t_sq[im - 1] and t_sq[im] >= t_sq[im + 1])
        if interior_max:
            ileft = int(np.argmin(t_sq[:im]))
            iright = im + 1 + int(np.argmin(t_sq[im + 1:]))
            dips_interior = ileft > 0 and iright < len(t_sq) - 1
            dips_low = (t_sq[ileft] <= (1.0 + CLASSIFY_MARGIN) * bare_ref
                        and t_sq[iright] <= (1.0 + CLASSIFY_MARGIN) * bare_ref)
            if dips_interior and dips_low:
                label = EIT

    if label == BARE:
        level = 0.5 * (t0 + tmax)
    else:
        level = 0.5 * (t0 + bare_ref)
    width = _feature_width(axis, t_sq, ic, level)
    return RegimeLabel(label=label, center_t_sq=t0, bare_reference=bare_ref,
                       max_t_sq=tmax, width=width)


def find_peak_transmission(spectrum):
    """(Delta_p, |t|^2) at the spectrum maximum, parabola-refined.

    Interior maxima are refined by a quadratic fit through the three
    surrounding samples; edge maxima are returned as sampled.
    """
    axis = spectrum.axis
    t_sq = spectrum.t_sq
    i = int(np.argmax(t_sq))
    if i == 0 or i == len(t_sq) - 1:
        return float(axis[i]), float(t_sq[i])
    x0, x1, x2 = axis[i - 1], axis[i], axis[i + 1]
    y0, y1, y2 = t_sq[i - 1], t_sq[i], t_sq[i + 1]
    denom = (y0 - 2.0 * y1 + y2)
    if denom == 0:
        return float(x1), float(y1)
    # uniform-grid parabola vertex
    h = x1 - x0
    shift = 0.5 * h * (y0 - y2) / denom
    peak = y1 - 0.125 * (y0 - y2) ** 2 / denom
    return float(x1 + shift), float(peak)
