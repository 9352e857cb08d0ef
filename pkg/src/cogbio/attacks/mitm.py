"""Meet-in-the-middle candidate recovery via half-secret partial sums.

Half-subsets of size floor(k/2) are indexed by their per-round partial
weight sums; the other halves (size ceil(k/2)) query that table. A round
where the querying half hits the window pins the stored half's sum exactly.
A round missed by the querying half is satisfiable two ways, by a stored
half that also misses (sum 0) or one whose sum equals the response, so both
keys are probed. The join can over-accept (a hit with sum 0 is
indistinguishable from a miss in the key), so every joined candidate is
re-verified against the full transcript before being reported; the final
set therefore matches brute force exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

from ..analysis import log2_comb_real
from ..errors import BudgetExceeded
from ..scheme import Secret, Transcript, consistent_with
from .bruteforce import CandidateSet, canonical_order

DEFAULT_MAX_HALF = 10 ** 6
# Rounds the querying half misses contribute up to two acceptable keys each;
# cap the resulting key product per query.
DEFAULT_MAX_KEYS_PER_QUERY = 1 << 20


@dataclass(frozen=True)
class _HalfView:
    sums: tuple[int, ...]  # per-round partial sum, 0 when the half misses
    hits: tuple[bool, ...]


def _half_view(half: frozenset, transcript: Transcript) -> _HalfView:
    d = transcript.params.d
    sums, hits = [], []
    for ch, _ in transcript.rounds:
        total = 0
        hit = False
        for obj, weight in zip(ch.a, ch.w):
            if obj in half:
                hit = True
                total += weight
        sums.append(total % d)
        hits.append(hit)
    return _HalfView(sums=tuple(sums), hits=tuple(hits))


def mitm_recover(transcript: Transcript,
                 max_half: int = DEFAULT_MAX_HALF,
                 max_keys_per_query: int = DEFAULT_MAX_KEYS_PER_QUERY) -> CandidateSet:
    params = transcript.params
    d, k, n = params.d, params.k, params.n
    k_store = k // 2
    k_query = k - k_store
    if math.comb(n, k_query) > max_half:
        raise BudgetExceeded(
            f"half enumeration needs {math.comb(n, k_query)} subsets (> {max_half})",
            estimate_bits=log2_comb_real(float(n), k / 2.0))

    table: dict[tuple[int, ...], list[frozenset]] = {}
    for combo in combinations(range(n), k_store):
        half = frozenset(combo)
        view = _half_view(half, transcript)
        table.setdefault(view.sums, []).append(half)

    found: set[Secret] = set()
    examined = 0
    for combo in combinations(range(n), k_query):
        half = frozenset(combo)
        view = _half_view(half, transcript)
        options: list[tuple[int, ...]] = []
        for (ch, r), own_sum, own_hit in zip(transcript.rounds, view.sums, view.hits):
            if own_hit:
                # The union hits this window, so the stored half must
                # complete the sum to the response (a miss stores sum 0).
                options.append(((r - own_sum) % d,))
            elif r == 0:
                options.append((0,))
            else:
                options.append((0, r))
        n_keys = math.prod(len(o) for o in options)
        if n_keys > max_keys_per_query:
            raise BudgetExceeded(
                f"query would probe {n_keys} keys (> {max_keys_per_query})")
        for key in product(*options):
            for stored in table.get(key, ()):
                if stored & half:
                    continue
                candidate = stored | half
                examined += 1
                if consistent_with(params, candidate, transcript):
                    found.add(candidate)
    return CandidateSet(candidates=canonical_order(found), enumerated=examined)
