"""Banded dynamic time warping with squared pointwise cost.

The alignment matrix is restricted to a band around the scaled diagonal:
cell (i, j) is admissible when |i * len2/len1 - j| <= radius. A band too
narrow to connect the two corners is widened to the smallest feasible
radius instead of failing. The row recurrence

    D[i][j] = cost[j] + min(D[i-1][j], D[i-1][j-1], D[i][j-1])

is evaluated without an inner scalar loop: entering row i at column j' and
then only moving right costs M[j'] + sum(cost[j'..j]) with
M[j'] = min(D[i-1][j'], D[i-1][j'-1]), so a running minimum of
M[j'] - cumsum[j'-1] gives the whole row at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError

DEFAULT_BAND_RADIUS = 20


@dataclass(frozen=True)
class DtwResult:
    distance: float
    band_radius: float   # radius actually used
    widened: bool        # True when the requested radius was infeasible


def _as_series(q) -> np.ndarray:
    arr = np.asarray(q, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DataError("series must be non-empty and one-dimensional")
    return arr


def _row_windows(len1: int, len2: int, radius: float):
    """Per-row admissible column windows [lo, hi] plus reachability lows."""
    i = np.arange(len1, dtype=np.float64)
    center = i * (len2 / len1)
    lo = np.maximum(np.ceil(center - radius), 0).astype(np.int64)
    hi = np.minimum(np.floor(center + radius), len2 - 1).astype(np.int64)
    # Paths cannot move left, so the lowest reachable column per row is the
    # running maximum of the lows.
    reach_lo = np.maximum.accumulate(lo)
    return lo, hi, reach_lo


def _feasible(len1: int, len2: int, radius: float) -> bool:
    lo, hi, reach_lo = _row_windows(len1, len2, radius)
    if np.any(reach_lo > hi):
        return False
    return lo[0] == 0 and hi[-1] == len2 - 1 and reach_lo[-1] <= len2 - 1


def _min_feasible_radius(len1: int, len2: int) -> int:
    lo, hi = 0, max(len1, len2)
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(len1, len2, mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def banded_dtw(q1, q2, band_radius: float = DEFAULT_BAND_RADIUS) -> DtwResult:
    a, b = _as_series(q1), _as_series(q2)
    if band_radius < 0:
        raise DataError(f"band radius must be >= 0, got {band_radius}")
    # Orient with the shorter series on rows so the distance is exactly
    # symmetric in its arguments.
    if len(a) > len(b):
        a, b = b, a
    len1, len2 = len(a), len(b)

    radius = band_radius
    widened = False
    if not _feasible(len1, len2, radius):
        radius = _min_feasible_radius(len1, len2)
        widened = True

    lo, hi, reach_lo = _row_windows(len1, len2, radius)
    inf = np.inf
    prev = np.full(len2 + 1, inf)  # shifted by one: prev[j+1] is D[i-1][j]
    cur = np.full(len2 + 1, inf)

    row_lo, row_hi = int(reach_lo[0]), int(hi[0])
    cost = (a[0] - b[row_lo:row_hi + 1]) ** 2
    cur[row_lo + 1:row_hi + 2] = np.cumsum(cost)
    for i in range(1, len1):
        prev, cur = cur, prev
        cur.fill(inf)
        row_lo, row_hi = int(reach_lo[i]), int(hi[i])
        cost = (a[i] - b[row_lo:row_hi + 1]) ** 2
        # Best way to enter each column from the previous row.
        entry = np.minimum(prev[row_lo + 1:row_hi + 2],
                           prev[row_lo:row_hi + 1])
        csum = np.cumsum(cost)
        shifted = np.concatenate(([0.0], csum[:-1]))
        cur[row_lo + 1:row_hi + 2] = csum + np.minimum.accumulate(entry - shifted)
    return DtwResult(distance=float(cur[len2]), band_radius=float(radius),
                     widened=widened)


def dtw_distance(q1, q2, band_radius: float = DEFAULT_BAND_RADIUS) -> float:
    return banded_dtw(q1, q2, band_radius).distance
