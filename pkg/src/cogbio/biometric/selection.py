"""Threshold sweeps and greedy forward feature selection.

The z-list sweeps the threshold multiplier over a fixed grid and records,
per z, how many genuine and imposter test samples fall under mu + z*sigma.
Selection grows a feature subset one feature at a time, at each step
keeping the candidate whose summed z-list (over all user/attacker pairs)
reaches the highest TPR sum with the lowest FPR sum; the final answer is
the best of the nested snapshots.

Distances are additive across features, so per-feature template-to-sample
distances are computed once per pair and subsets are scored by summing
cached columns instead of re-running the alignment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParamError
from .dtw import DEFAULT_BAND_RADIUS, dtw_distance
from .features import FeatureSet
from .template import build_template, feature_medoid

Z_MAX = 10.0
Z_STEP = 0.125


def z_grid() -> np.ndarray:
    """The 81 threshold multipliers 0, 0.125, ..., 10."""
    return np.arange(0, int(round(Z_MAX / Z_STEP)) + 1) * Z_STEP


@dataclass(frozen=True)
class ZListEntry:
    z: float
    tpr: float
    fpr: float


@dataclass(frozen=True)
class SelectionPair:
    """One genuine user (registration + held-out tests) and one attacker."""
    registration: tuple[FeatureSet, ...]
    user_tests: tuple[FeatureSet, ...]
    attacker_tests: tuple[FeatureSet, ...]


def _entries(mu: float, sigma: float, user_d: np.ndarray,
             att_d: np.ndarray) -> list[ZListEntry]:
    out = []
    for z in z_grid():
        threshold = mu + z * sigma
        out.append(ZListEntry(z=float(z),
                              tpr=float(np.mean(user_d <= threshold)),
                              fpr=float(np.mean(att_d <= threshold))))
    return out


def get_z_list(feature_subset, registration, user_tests, attacker_tests,
               band_radius: float = DEFAULT_BAND_RADIUS) -> list[ZListEntry]:
    if not user_tests or not attacker_tests:
        raise ParamError("z-list needs non-empty genuine and attacker tests")
    template = build_template(list(registration), tuple(feature_subset),
                              band_radius=band_radius)
    from .template import multi_dtw
    user_d = np.array([multi_dtw(template, s) for s in user_tests])
    att_d = np.array([multi_dtw(template, s) for s in attacker_tests])
    return _entries(template.mu, template.sigma, user_d, att_d)


class _PairCache:
    """Per-feature distance columns for one pair, reused across subsets."""

    def __init__(self, pair: SelectionPair, features, band_radius: float):
        reg = list(pair.registration)
        if len(reg) < 2:
            raise ParamError("selection pair needs >= 2 registration samples")
        if not pair.user_tests or not pair.attacker_tests:
            raise ParamError("selection pair needs non-empty test sets")
        self.reg_d, self.user_d, self.att_d = {}, {}, {}
        for name in features:
            medoid = reg[feature_medoid(reg, name, band_radius)].series[name]
            self.reg_d[name] = np.array(
                [dtw_distance(medoid, s.series[name], band_radius)
                 for s in reg])
            self.user_d[name] = np.array(
                [dtw_distance(medoid, s.series[name], band_radius)
                 for s in pair.user_tests])
            self.att_d[name] = np.array(
                [dtw_distance(medoid, s.series[name], band_radius)
                 for s in pair.attacker_tests])

    def rates(self, subset) -> tuple[np.ndarray, np.ndarray]:
        """(tpr, fpr) over the z grid for one feature subset."""
        reg = sum(self.reg_d[n] for n in subset)
        user = sum(self.user_d[n] for n in subset)
        att = sum(self.att_d[n] for n in subset)
        thresholds = reg.mean() + z_grid() * reg.std()
        tpr = (user[None, :] <= thresholds[:, None]).mean(axis=1)
        fpr = (att[None, :] <= thresholds[:, None]).mean(axis=1)
        return tpr, fpr


def _best_entry(tpr_sum: np.ndarray, fpr_sum: np.ndarray):
    """(−tpr, fpr, z) lexicographic best over the grid."""
    grid = z_grid()
    order = np.lexsort((grid, fpr_sum, -tpr_sum))
    best = order[0]
    return float(tpr_sum[best]), float(fpr_sum[best]), float(grid[best])


def select_features(all_features, pairs,
                    band_radius: float = DEFAULT_BAND_RADIUS):
    """Greedy forward selection; returns (feature_subset, z)."""
    features = tuple(all_features)
    if not features:
        raise ParamError("no features to select from")
    if not pairs:
        raise ParamError("need at least one user/attacker pair")
    caches = [_PairCache(p, features, band_radius) for p in pairs]

    def score(subset):
        tpr_sum = np.zeros(len(z_grid()))
        fpr_sum = np.zeros(len(z_grid()))
        for cache in caches:
            tpr, fpr = cache.rates(subset)
            tpr_sum += tpr
            fpr_sum += fpr
        return _best_entry(tpr_sum, fpr_sum)

    current: tuple[str, ...] = ()
    remaining = list(features)
    snapshots = []
    while remaining:
        scored = [(score(current + (name,)), name) for name in remaining]
        (tpr, fpr, z), picked = max(
            scored, key=lambda item: (item[0][0], -item[0][1], -item[0][2]))
        current = current + (picked,)
        remaining.remove(picked)
        snapshots.append((current, tpr, fpr, z))

    best = max(snapshots,
               key=lambda s: (s[1], -s[2], -s[3], -len(s[0])))
    return best[0], best[3]
