"""Frequency analysis of observed challenge windows.

Counts how often each object tuple appears, optionally split per response
value, and tests each tuple's response-conditional counts for deviation
from the overall response distribution. Under the correct scheme the
responses conditioned on any shown tuple are uniform, so nothing is
flagged beyond the test's false-positive rate. A broken variant that
answers 0 in the empty case skews decoy-conditioned counts toward 0 while
pass-object rows stay uniform, and the pass-objects stand out.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.stats import chi2

from ..errors import ParamError
from ..scheme import Transcript

MODE_INDEPENDENT = "independent"  # presence counts only
MODE_DEPENDENT = "dependent"      # per-response counts + chi-square per tuple

# Enumerating all delta-tuples of an n-object pool is the table size; keep it sane.
MAX_TUPLES = 2 * 10 ** 6


@dataclass(frozen=True)
class FrequencyReport:
    mode: str
    delta: int
    counts: dict[tuple[int, ...], np.ndarray]  # tuple -> d counts (dependent) or [total]
    stats: dict[tuple[int, ...], float]        # chi-square per tuple (dependent only)
    flagged: tuple[tuple[int, ...], ...]       # tuples beyond the critical value
    alpha: float
    critical: float
    rounds: int


def frequency_analysis(transcript: Transcript, delta: int = 1,
                       mode: str = MODE_DEPENDENT,
                       alpha: float = 0.01) -> FrequencyReport:
    params = transcript.params
    if delta < 1:
        raise ParamError(f"delta must be >= 1, got {delta}")
    if mode not in (MODE_INDEPENDENT, MODE_DEPENDENT):
        raise ParamError(f"unknown mode {mode!r}")
    n_tuples = 1
    for i in range(delta):
        n_tuples = n_tuples * (params.n - i) // (i + 1)
    if n_tuples > MAX_TUPLES:
        raise ParamError(f"delta={delta} enumerates {n_tuples} tuples (> {MAX_TUPLES})")

    d = params.d
    width = d if mode == MODE_DEPENDENT else 1
    response_totals = np.zeros(d, dtype=np.int64)
    if delta == 1 and len(transcript) > 0:
        a_mat = np.array([ch.a for ch, _ in transcript.rounds], dtype=np.int64)
        r_vec = np.array([r for _, r in transcript.rounds], dtype=np.int64)
        np.add.at(response_totals, r_vec, 1)
        table = np.zeros((params.n, width), dtype=np.int64)
        cols = np.repeat(r_vec, params.l) if mode == MODE_DEPENDENT \
            else np.zeros(a_mat.size, dtype=np.int64)
        np.add.at(table, (a_mat.ravel(), cols), 1)
        counts = {(i,): table[i] for i in range(params.n)}
    else:
        counts = {
            combo: np.zeros(width, dtype=np.int64)
            for combo in combinations(range(params.n), delta)
        }
        for ch, r in transcript.rounds:
            response_totals[r] += 1
            window = sorted(ch.a)
            for combo in combinations(window, delta):
                counts[combo][r if mode == MODE_DEPENDENT else 0] += 1

    stats: dict[tuple[int, ...], float] = {}
    flagged: list[tuple[int, ...]] = []
    critical = float(chi2.ppf(1.0 - alpha, d - 1))
    if mode == MODE_DEPENDENT and len(transcript) > 0:
        # Expected split per tuple follows the overall response mix; for the
        # correct scheme that mix is uniform and this reduces to a plain
        # uniformity test at the stated alpha.
        marginal = response_totals / len(transcript)
        for combo, vec in counts.items():
            total = int(vec.sum())
            if total == 0:
                stats[combo] = 0.0
                continue
            expected = total * marginal
            mask = expected > 0
            stat = float((((vec - expected) ** 2)[mask] / expected[mask]).sum())
            stats[combo] = stat
            if stat > critical:
                flagged.append(combo)
    return FrequencyReport(mode=mode, delta=delta, counts=counts, stats=stats,
                           flagged=tuple(flagged), alpha=alpha, critical=critical,
                           rounds=len(transcript))
