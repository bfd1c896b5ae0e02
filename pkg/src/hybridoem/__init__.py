"""Mechanically mediated probe response of a hybrid cavity system.

An optical cavity and a microwave cavity share one mechanical resonator;
pumping each cavity near a mechanical sideband reshapes the transmission
of a weak probe on the optical port.  The package computes classical
steady states, probe transmission spectra, group delay, dynamical
stability, and classifies each operating point as BARE / EIT / EIA /
AMPLIFICATION.
"""

from .errors import (ConfigError, ConsistencyError, CoverageError, DelayError,
                     HybridOEMError, InstabilityError, SettleTimeoutError,
                     SingularResponseError, SolverError, ValidationError)
from .model import (HBAR, Convention, DriveAmplitudes, DriveConfig,
                    PAPER_LITERAL, PhysicalConstants, STANDARD, SystemParams,
                    ValidationReport, drive_amplitudes, probe_detuning,
                    pump_amplitude, pump_beat_detuning, validate_params)
from .presets import blue_red_drive, example_device, red_red_drive
from .steady import (SolverOptions, SteadyState, photon_number_fixed_point,
                     solve_steady_state, steady_state_fields)
from .meanfield import mean_field_settles, mean_field_steady_state
from .response import (DelayResult, FluctuationAmplitudes, ResponsePoint,
                       effective_mechanical_denominator,
                       fluctuation_linear_solve, group_delay,
                       output_field_components, probe_sideband_amplitude,
                       probe_transmission, response_point)
from .stability import (StabilityReport, assess_stability,
                        find_instability_power, linear_dynamics_matrix)
from .sweeps import (AMPLIFICATION, AxisSpec, BARE, EIA, EIT, PowerScan,
                     RegimeLabel, Spectrum, classify_regime,
                     find_peak_transmission, mechanical_window_axis,
                     power_sweep, spectrum_axis, spectrum_sweep)
from .config import RunConfig, parse_config, parse_quantity
from .output import ResultEnvelope, emit_results, parse_json_envelope

__version__ = "0.1.0"
