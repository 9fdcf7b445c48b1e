"""Exception types shared across the package."""


class DuopolyLabError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(DuopolyLabError):
    """Invalid or unknown configuration input."""


class ModelMismatchError(DuopolyLabError):
    """A demand/benchmark routine was called with the wrong market model."""


class InvalidBenchmarkError(DuopolyLabError):
    """Benchmark prices are inconsistent (e.g. monopoly below Nash)."""


class DegenerateBenchmarkError(DuopolyLabError):
    """Benchmark interval has zero width, so normalized indices are undefined."""


class BenchmarkFailureError(DuopolyLabError):
    """Best-response fixed point failed to converge.

    Carries the last iterate and residual for diagnostics.
    """

    def __init__(self, message, last_iterate, residual):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
