"""Core round mechanics: secrets, challenges, responses, transcripts.

The response to a challenge (a, w) under secret x is the weight sum of the
pass-objects present in the window, mod d. When no pass-object is shown the
user answers with a uniformly random element of Z_d, so an observer cannot
tell the empty case apart from a real computation.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DataError, ParamError
from .params import SchemeParams

Secret = frozenset  # k distinct object ids in [0, n)


@dataclass(frozen=True)
class Challenge:
    """An ordered window of l distinct object ids and their weights in Z_d."""

    a: tuple[int, ...]
    w: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.a) != len(self.w):
            raise ParamError(f"|a|={len(self.a)} != |w|={len(self.w)}")
        if len(set(self.a)) != len(self.a):
            raise ParamError("challenge objects must be distinct")


class VerifyOutcome(enum.Enum):
    CORRECT = "correct"
    WRONG = "wrong"
    EMPTY_ANY = "empty-case-any"  # no pass-object shown: any response is valid


@dataclass(frozen=True)
class Transcript:
    """An observed sequence of (challenge, response) rounds under one params set.

    Protocol-produced transcripts are consistent with the enrolled secret;
    the container itself does not enforce that, because the attack suite is
    also exercised on uniformly random response sequences.
    """

    params: SchemeParams
    rounds: tuple[tuple[Challenge, int], ...]

    def __len__(self) -> int:
        return len(self.rounds)

    def to_json(self) -> str:
        payload = {
            "params": {"d": self.params.d, "k": self.params.k,
                       "l": self.params.l, "n": self.params.n},
            "rounds": [
                {"a": list(ch.a), "w": list(ch.w), "r": int(r)}
                for ch, r in self.rounds
            ],
        }
        return json.dumps(payload)

    @staticmethod
    def from_json(text: str) -> "Transcript":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"transcript is not valid JSON: {exc}") from exc
        try:
            p = payload["params"]
            # gamma/t are session-level knobs; the wire format carries only
            # the cognitive quadruple, so fill legal placeholders.
            params = SchemeParams(d=int(p["d"]), k=int(p["k"]),
                                  l=int(p["l"]), n=int(p["n"]), gamma=1, t=1)
            rounds = tuple(
                (Challenge(a=tuple(int(v) for v in rd["a"]),
                           w=tuple(int(v) for v in rd["w"])),
                 int(rd["r"]))
                for rd in payload["rounds"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"transcript JSON missing or malformed field: {exc}") from exc
        for ch, r in rounds:
            if not 0 <= r < params.d:
                raise DataError(f"response {r} outside Z_{params.d}")
            if len(ch.a) != params.l:
                raise DataError(f"challenge window size {len(ch.a)} != l={params.l}")
        return Transcript(params=params, rounds=rounds)


def sample_secret(params: SchemeParams, rng: np.random.Generator) -> Secret:
    """Uniformly random k-subset of the object pool."""
    picked = rng.choice(params.n, size=params.k, replace=False)
    return frozenset(int(v) for v in picked)


def sample_challenge(params: SchemeParams, rng: np.random.Generator) -> Challenge:
    """Uniform l-subset of the pool in random display order, weights uniform in Z_d.

    Zero weights are allowed; a zero-weighted pass-object simply contributes
    nothing to the response sum.
    """
    a = rng.permutation(params.n)[: params.l]
    w = rng.integers(0, params.d, size=params.l)
    return Challenge(a=tuple(int(v) for v in a), w=tuple(int(v) for v in w))


def response_sum(secret: Secret, challenge: Challenge, d: int) -> int | None:
    """Weight sum of shown pass-objects mod d, or None in the empty case."""
    total = 0
    hit = False
    for obj, weight in zip(challenge.a, challenge.w):
        if obj in secret:
            hit = True
            total += weight
    return total % d if hit else None


def compute_response(params: SchemeParams, secret: Secret, challenge: Challenge,
                     rng: np.random.Generator) -> int:
    """Evaluate a round as the legitimate user would."""
    total = response_sum(secret, challenge, params.d)
    if total is None:
        return int(rng.integers(0, params.d))
    return total


def verify_response(params: SchemeParams, secret: Secret, challenge: Challenge,
                    response: int) -> VerifyOutcome:
    """Check a response against the secret; empty-case rounds accept anything."""
    if not 0 <= response < params.d:
        raise DataError(f"response {response} outside Z_{params.d}")
    total = response_sum(secret, challenge, params.d)
    if total is None:
        return VerifyOutcome.EMPTY_ANY
    return VerifyOutcome.CORRECT if response == total else VerifyOutcome.WRONG


def planted_transcript(params: SchemeParams, secret: Secret, m: int,
                       rng: np.random.Generator,
                       empty_response: str = "uniform") -> Transcript:
    """m rounds answered under the given secret.

    empty_response selects the behaviour when no pass-object is shown:
    "uniform" is the scheme as designed; "zero" is a deliberately broken
    variant (always answer 0) kept for leak experiments.
    """
    if empty_response not in ("uniform", "zero"):
        raise ParamError(f"unknown empty_response {empty_response!r}")
    rounds = []
    for _ in range(m):
        ch = sample_challenge(params, rng)
        total = response_sum(secret, ch, params.d)
        if total is None:
            total = int(rng.integers(0, params.d)) if empty_response == "uniform" else 0
        rounds.append((ch, total))
    return Transcript(params=params, rounds=tuple(rounds))


def random_transcript(params: SchemeParams, m: int,
                      rng: np.random.Generator) -> Transcript:
    """m rounds with uniformly random responses, unrelated to any secret."""
    rounds = []
    for _ in range(m):
        ch = sample_challenge(params, rng)
        rounds.append((ch, int(rng.integers(0, params.d))))
    return Transcript(params=params, rounds=tuple(rounds))


def consistent_with(params: SchemeParams, candidate: Iterable[int],
                    transcript: Transcript) -> bool:
    """True if the candidate secret could have produced every round.

    Empty-case rounds are vacuously consistent because the user's answer
    there is noise by design.
    """
    cand = frozenset(candidate)
    for ch, r in transcript.rounds:
        total = response_sum(cand, ch, params.d)
        if total is not None and total != r:
            return False
    return True
