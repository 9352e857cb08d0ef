"""Closed-form security quantities for the cognitive scheme.

Everything here is a pure function of the parameter tuple: guessing
probability, information-theoretic sample bound, attack complexities, and
the combined two-factor security of a full session.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ParamError
from .params import SchemeParams

_LN2 = math.log(2.0)


def log2_comb(n: int, k: int) -> float:
    """log2 of C(n, k) for integer arguments, exact combinatorics underneath."""
    value = math.comb(n, k)
    if value == 0:
        return -math.inf
    return _log2_bigint(value)


def _log2_bigint(value: int) -> float:
    # math.log2 rejects ints above float range; split via bit_length first.
    if value.bit_length() <= 1000:
        return math.log2(value)
    shift = value.bit_length() - 900
    return math.log2(value >> shift) + shift


def log2_comb_real(n: float, k: float) -> float:
    """log2 of the gamma-interpolated binomial C(n, k) for real arguments.

    Returns -inf when k < 0 or k > n, matching the integer convention that
    such binomials vanish.
    """
    if k < 0 or k > n:
        return -math.inf
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / _LN2


def p_empty(params: SchemeParams) -> float:
    """Probability that a challenge window contains no pass-object."""
    return float(Fraction(math.comb(params.n - params.k, params.l),
                          math.comb(params.n, params.l)))


def hypergeom_pmf(params: SchemeParams, i: int) -> float:
    """Probability that exactly i pass-objects appear in the window."""
    if not 0 <= i <= min(params.k, params.l):
        raise ParamError(f"i={i} outside [0, min(k, l)={min(params.k, params.l)}]")
    num = math.comb(params.k, i) * math.comb(params.n - params.k, params.l - i)
    return float(Fraction(num, math.comb(params.n, params.l)))


def p_random_guess(params: SchemeParams) -> float:
    """Per-round success probability of an answer drawn uniformly from Z_d.

    The empty case always accepts, and otherwise a uniform guess hits the
    one valid response with probability 1/d.
    """
    p0 = p_empty(params)
    return p0 + (1.0 - p0) / params.d


def info_theoretic_bound(params: SchemeParams) -> int:
    """Expected number of observed rounds after which one candidate remains.

    Solves (p_guess)^m * C(n, k) = 1 for m and rounds to the nearest
    integer.
    """
    bits = log2_comb(params.n, params.k)
    m = -bits / math.log2(p_random_guess(params))
    return int(math.floor(m + 0.5))


def expected_surviving_candidates(params: SchemeParams, m: int) -> float:
    """Expected count of k-subsets consistent with m uniformly random rounds."""
    if m < 0:
        raise ParamError(f"m must be >= 0, got {m}")
    return math.comb(params.n, params.k) * p_random_guess(params) ** m


def complexity_bits(params: SchemeParams) -> tuple[float, float]:
    """(brute-force bits, meet-in-the-middle bits).

    Brute force enumerates all C(n, k) secrets. The meet-in-the-middle
    attack stores C(n, k/2) half-secrets; for odd k the real-valued
    gamma-interpolated binomial is reported.
    """
    bf = log2_comb(params.n, params.k)
    mitm = log2_comb_real(float(params.n), params.k / 2.0)
    return bf, mitm


@dataclass(frozen=True)
class BallSearchEstimate:
    """Cost estimate for a radius-limited candidate search.

    The modelled attack walks candidate secrets by flipping up to xi bits of
    an L-bit encoding (L = log2 of the secret space), using observed rounds
    to score candidates; the score gap shrinks with xi, which drives the
    sample requirement up as the time budget comes down.
    """

    xi: int
    time_bits: float
    required_samples: float  # math.inf when the score gap vanishes
    feasible: bool  # time_bits fits the requested budget


def ball_search_estimate(params: SchemeParams, time_budget_bits: float) -> BallSearchEstimate:
    """Pick the search radius whose running time lands nearest the budget.

    Scans xi = 1..L and reports time = L - log2 C(L, xi) bits together with
    the number of observed rounds needed to separate true from near-miss
    candidates at that radius. When even the slowest point exceeds the
    budget the minimum-time point is returned flagged infeasible.
    """
    if time_budget_bits <= 0:
        raise ParamError(f"time budget must be positive, got {time_budget_bits}")
    L = log2_comb(params.n, params.k)
    upsilon = (params.l / params.n) * L
    best: BallSearchEstimate | None = None
    fallback: BallSearchEstimate | None = None
    for xi in range(1, max(2, int(L)) + 1):
        time_bits = L - log2_comb_real(L, xi)
        base = log2_comb_real(L, upsilon)
        near = log2_comb_real(L - xi + 1, upsilon)
        far = log2_comb_real(L - xi - 1, upsilon)
        gap = (2.0 ** (near - base) - 2.0 ** (far - base)) * (1.0 - 1.0 / params.d)
        if gap <= 0.0:
            samples = math.inf
        else:
            samples = float(math.ceil(1.0 / gap ** 2))
        cand = BallSearchEstimate(xi=xi, time_bits=time_bits,
                                  required_samples=samples,
                                  feasible=time_bits <= time_budget_bits)
        if fallback is None or abs(cand.time_bits - time_budget_bits) < abs(fallback.time_bits - time_budget_bits):
            fallback = cand
        if math.isfinite(samples):
            if best is None or abs(cand.time_bits - time_budget_bits) < abs(best.time_bits - time_budget_bits):
                best = cand
    # A vanished score gap means that radius cannot be run at any sample
    # count, so such points are only reported when no workable radius exists.
    chosen = best if best is not None else fallback
    assert chosen is not None
    return chosen


@dataclass(frozen=True)
class AnalysisRow:
    """All per-parameter-set security quantities, plus combined session security."""

    params: SchemeParams
    p_rg: float
    m_it: int
    bf_bits: float
    mitm_bits: float
    ball_xi: int
    ball_bits: float
    ball_samples: float
    ge_samples: int
    combined: dict[int, float] = field(default_factory=dict)  # gamma -> p_tot


def analysis_row(params: SchemeParams, fpr_bar: float = 0.05,
                 gamma_list: Sequence[int] = (1, 2, 3),
                 ball_budget_bits: float | None = None) -> AnalysisRow:
    """Compute one table row; see security_table for the budget default."""
    if not 0.0 < fpr_bar <= 1.0:
        raise ParamError(f"fpr_bar must be in (0, 1], got {fpr_bar}")
    p_rg = p_random_guess(params)
    bf, mitm = complexity_bits(params)
    if ball_budget_bits is None:
        # Default search budget: match the strongest generic attack's time.
        ball_budget_bits = mitm
    ball = ball_search_estimate(params, ball_budget_bits)
    combined = {int(g): (p_rg * fpr_bar) ** g for g in gamma_list}
    return AnalysisRow(
        params=params,
        p_rg=p_rg,
        m_it=info_theoretic_bound(params),
        bf_bits=bf,
        mitm_bits=mitm,
        ball_xi=ball.xi,
        ball_bits=ball.time_bits,
        ball_samples=ball.required_samples,
        ge_samples=params.d * params.n,
        combined=combined,
    )


def security_table(params_list: Sequence[SchemeParams], fpr_bar: float = 0.05,
                   gamma_list: Sequence[int] = (1, 2, 3),
                   ball_budgets: Sequence[float] | None = None) -> list[AnalysisRow]:
    """One AnalysisRow per parameter set.

    ball_budgets optionally pins the search-time budget per row; by default
    each row uses its own meet-in-the-middle time so the sample counts are
    comparable across attack columns.
    """
    if ball_budgets is not None and len(ball_budgets) != len(params_list):
        raise ParamError("ball_budgets must match params_list length")
    rows = []
    for idx, params in enumerate(params_list):
        budget = ball_budgets[idx] if ball_budgets is not None else None
        rows.append(analysis_row(params, fpr_bar=fpr_bar, gamma_list=gamma_list,
                                 ball_budget_bits=budget))
    return rows
