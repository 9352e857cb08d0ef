"""Shared exception types."""


class ParamError(ValueError):
    """Raised when scheme parameters fail validation."""


class DataError(ValueError):
    """Raised for malformed transcripts, traces, or other input files."""


class ProtocolError(RuntimeError):
    """Raised when a caller violates the service lifecycle: configuring,
    enrolling, and session round ordering."""


class BudgetExceeded(RuntimeError):
    """Raised when an attack would exceed its configured work budget.

    Carries an estimate of the work that would have been required so the
    caller can report it instead of silently hanging.
    """

    def __init__(self, message: str, estimate_bits: float | None = None):
        super().__init__(message)
        self.estimate_bits = estimate_bits
