"""Cognitive challenge-response authentication with a handwriting verifier.

The package has four layers: the round mechanics and closed-form analysis
(scheme, analysis), executable attacks on observed transcripts (attacks),
the handwriting feature/DTW verifier (biometric), and the session service
plus operator CLI (service, simulate, cli).
"""

from .params import SchemeParams, new_params

__all__ = ["SchemeParams", "new_params"]
