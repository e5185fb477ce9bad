"""
Exception hierarchy for spectrafill.

Configuration problems map to CLI exit code 2, numerical failures to 3.
"""

from typing import Optional


class SpectraFillError(Exception):
    """Base class for all spectrafill errors."""

    exit_code: int = 1


class ConfigError(SpectraFillError):
    """Invalid user input: parameters, files, presets or schedules."""

    exit_code = 2


class InvalidParameterError(ConfigError, ValueError):
    """A parameter is outside its valid range."""


class SizeMismatchError(ConfigError, ValueError):
    """Two grids that must share a side length do not."""


class MaskFormatError(ConfigError):
    """A mask file cannot be parsed or violates the mask invariants."""


class GridFormatError(ConfigError):
    """A float grid, atom or graph file cannot be parsed."""


class InvalidScheduleError(ConfigError):
    """A restoration schedule is malformed."""


class NumericalError(SpectraFillError):
    """A numerical routine failed."""

    exit_code = 3


class NonHermitianError(NumericalError):
    """A spectrum that should represent a real image is not Hermitian."""


class NoConvergenceError(NumericalError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(
        self,
        message: str,
        iterations: Optional[int] = None,
        residual: Optional[float] = None,
    ):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class ExperimentStageError(SpectraFillError):
    """Failure inside one stage of an experiment run."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)
