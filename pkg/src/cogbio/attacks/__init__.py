"""Executable attacks against observed transcripts, plus attack reports."""

from __future__ import annotations

import json
from typing import Any

from ..scheme import Secret
from .bruteforce import CandidateSet, brute_force_recover
from .frequency import (MODE_DEPENDENT, MODE_INDEPENDENT, FrequencyReport,
                        frequency_analysis)
from .gaussian import (EliminationResult, ge_recover, ge_slack_recover,
                       monte_carlo_full_rank)
from .mitm import mitm_recover
from .stats import binomial_significance

__all__ = [
    "CandidateSet", "brute_force_recover", "mitm_recover",
    "EliminationResult", "ge_recover", "ge_slack_recover",
    "monte_carlo_full_rank", "FrequencyReport", "frequency_analysis",
    "MODE_DEPENDENT", "MODE_INDEPENDENT", "binomial_significance",
    "attack_report",
]


def attack_report(attack: str, *, recovered: bool, secret: Secret | None,
                  work: dict[str, Any], stats: dict[str, Any]) -> str:
    """Uniform JSON report emitted by the CLI for every attack run."""
    payload = {
        "attack": attack,
        "recovered": bool(recovered),
        "secret": sorted(int(x) for x in secret) if secret is not None else None,
        "work": work,
        "stats": stats,
    }
    return json.dumps(payload, indent=2)
