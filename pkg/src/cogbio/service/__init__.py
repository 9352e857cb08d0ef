"""Authentication service: enrollment, challenge rounds, deferred verdicts."""

from .core import (AuthService, Enrollment, RoundOutcome, SubmitResult,
                   VERDICT_ACCEPT, VERDICT_REJECT)
from .store import Store

__all__ = ["AuthService", "Enrollment", "RoundOutcome", "SubmitResult",
           "VERDICT_ACCEPT", "VERDICT_REJECT", "Store"]
