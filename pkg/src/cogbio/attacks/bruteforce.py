"""Exhaustive candidate enumeration over all k-subsets of the pool."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from ..analysis import log2_comb
from ..errors import BudgetExceeded
from ..scheme import Secret, Transcript, consistent_with

DEFAULT_MAX_CANDIDATES = 10 ** 7


@dataclass(frozen=True)
class CandidateSet:
    """Secrets consistent with every round of a transcript, in canonical order."""

    candidates: tuple[Secret, ...]
    enumerated: int  # total candidates examined

    def __contains__(self, secret) -> bool:
        return frozenset(secret) in set(self.candidates)

    def __len__(self) -> int:
        return len(self.candidates)


def canonical_order(candidates) -> tuple[Secret, ...]:
    return tuple(sorted(candidates, key=lambda s: tuple(sorted(s))))


def brute_force_recover(transcript: Transcript,
                        max_candidates: int = DEFAULT_MAX_CANDIDATES) -> CandidateSet:
    """Filter every k-subset against the transcript.

    Empty-case rounds reject nothing, so the planted secret always survives.
    """
    params = transcript.params
    total = math.comb(params.n, params.k)
    if total > max_candidates:
        raise BudgetExceeded(
            f"brute force needs {total} candidates (> budget {max_candidates})",
            estimate_bits=log2_comb(params.n, params.k))
    kept = [frozenset(combo) for combo in combinations(range(params.n), params.k)
            if consistent_with(params, combo, transcript)]
    return CandidateSet(candidates=canonical_order(kept), enumerated=total)
