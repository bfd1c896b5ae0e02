"""Exception types shared across the package."""

__all__ = [
    "HybridOEMError",
    "ValidationError",
    "SolverError",
    "ConsistencyError",
    "InstabilityError",
    "SettleTimeoutError",
    "SingularResponseError",
    "DelayError",
    "CoverageError",
    "ConfigError",
]


class HybridOEMError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(HybridOEMError, ValueError):
    """Parameter set violates a model invariant."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(report.errors))


class SolverError(HybridOEMError):
    """Fixed-point solver failed to converge; carries the last iterate."""

    def __init__(self, message, last_iterate=None, residual=None):
        self.last_iterate = last_iterate
        self.residual = residual
        super().__init__(message)


class ConsistencyError(HybridOEMError):
    """Internally inconsistent steady-state inputs."""


class InstabilityError(HybridOEMError):
    """Mean-field trajectory diverged (dynamically unstable operating point)."""

    def __init__(self, message, state=None, time=None):
        self.state = state
        self.time = time
        super().__init__(message)


class SettleTimeoutError(HybridOEMError):
    """Mean-field trajectory did not settle within the time budget."""

    def __init__(self, message, state=None, time=None):
        self.state = state
        self.time = time
        super().__init__(message)


class SingularResponseError(HybridOEMError):
    """The mechanical response denominator vanished at the requested detuning."""

    def __init__(self, message, delta=None):
        self.delta = delta
        super().__init__(message)


class DelayError(HybridOEMError):
    """Group delay is ill conditioned (phase discontinuity within the stencil)."""


class CoverageError(HybridOEMError):
    """Spectrum axis does not cover the range required by the operation."""


class ConfigError(HybridOEMError):
    """Configuration file could not be parsed or validated."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}" + (f", column {col})" if col is not None else ")")
        super().__init__(message)
