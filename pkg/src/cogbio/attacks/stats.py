"""Small statistical helpers shared by attack experiments."""

from __future__ import annotations

from scipy.stats import binom

from ..errors import ParamError


def binomial_significance(v: int, i: int, p: float) -> float:
    """Upper-tail probability P[X >= i] for X ~ Binomial(v, p).

    Used to decide whether i successes out of v attempts are explainable
    by chance at rate p. Delegates to a log-space survival function, so
    tiny tails do not underflow.
    """
    if not 0 <= i <= v:
        raise ParamError(f"i={i} outside [0, v={v}]")
    if not 0.0 < p < 1.0:
        raise ParamError(f"p must be in (0, 1), got {p}")
    if i == 0:
        return 1.0
    return float(binom.sf(i - 1, v, p))
