"""Reference templates and the two-step accept decision.

A template stores, per feature, the registration series with the smallest
summed distance to the other registration series (the medoid; different
features may pick different samples). The acceptance threshold is
mu + z * sigma over the template-to-registration distances.

Verification runs in two steps: first the rendering must look like the
right symbol (coordinate features against that symbol's shape template),
then it must move like the enrolled user (the full feature subset against
the user template). When no expected symbol is known the nearest shape
template is assumed before thresholding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError, ParamError
from .dtw import DEFAULT_BAND_RADIUS, dtw_distance
from .features import FEATURE_NAMES, SYM_FEATURES, FeatureSet

PURPOSE_SYM = "sym"
PURPOSE_USER = "user"
DEFAULT_Z = 2.0


@dataclass(frozen=True)
class Template:
    series: dict[str, np.ndarray]
    mu: float
    sigma: float
    feature_subset: tuple[str, ...]
    z: float
    purpose: str
    band_radius: float = DEFAULT_BAND_RADIUS

    @property
    def threshold(self) -> float:
        return self.mu + self.z * self.sigma

    def with_z(self, z: float) -> "Template":
        return Template(series=self.series, mu=self.mu, sigma=self.sigma,
                        feature_subset=self.feature_subset, z=z,
                        purpose=self.purpose, band_radius=self.band_radius)

    def to_json(self) -> str:
        return json.dumps({
            "series": {k: list(v) for k, v in self.series.items()},
            "mu": self.mu, "sigma": self.sigma,
            "feature_subset": list(self.feature_subset),
            "z": self.z, "purpose": self.purpose,
            "band_radius": self.band_radius,
        })

    @classmethod
    def from_json(cls, text: str) -> "Template":
        try:
            obj = json.loads(text)
            return cls(
                series={k: np.asarray(v, dtype=np.float64)
                        for k, v in obj["series"].items()},
                mu=float(obj["mu"]), sigma=float(obj["sigma"]),
                feature_subset=tuple(obj["feature_subset"]),
                z=float(obj["z"]), purpose=obj["purpose"],
                band_radius=float(obj.get("band_radius", DEFAULT_BAND_RADIUS)),
            )
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise DataError(f"bad template payload: {exc}") from exc


def multi_dtw(template: Template, sample: FeatureSet) -> float:
    """Summed per-feature distance between a template and one sample."""
    total = 0.0
    for name in template.feature_subset:
        if name not in sample.series:
            raise DataError(f"feature {name!r} missing from sample")
        total += dtw_distance(template.series[name], sample.series[name],
                              template.band_radius)
    return total


def feature_medoid(samples: list[FeatureSet], name: str,
                   band_radius: float = DEFAULT_BAND_RADIUS) -> int:
    """Index of the sample whose series minimizes the summed distance to
    the others (first index on ties)."""
    t = len(samples)
    dist = np.zeros((t, t))
    for i in range(t):
        for j in range(i + 1, t):
            dij = dtw_distance(samples[i].series[name],
                               samples[j].series[name], band_radius)
            dist[i, j] = dist[j, i] = dij
    return int(np.argmin(dist.sum(axis=1)))


def build_template(samples: list[FeatureSet],
                   feature_subset: tuple[str, ...] | None = None,
                   purpose: str = PURPOSE_USER,
                   z: float = DEFAULT_Z,
                   band_radius: float = DEFAULT_BAND_RADIUS) -> Template:
    if purpose not in (PURPOSE_SYM, PURPOSE_USER):
        raise ParamError(f"unknown template purpose {purpose!r}")
    if len(samples) < 2:
        raise ParamError(
            f"need >= 2 registration samples for a spread estimate, "
            f"got {len(samples)}")
    if purpose == PURPOSE_SYM:
        subset = SYM_FEATURES
    elif feature_subset is None:
        common = frozenset.intersection(*(s.available for s in samples))
        subset = tuple(n for n in FEATURE_NAMES if n in common)
    else:
        subset = tuple(feature_subset)
        unknown = set(subset) - set(FEATURE_NAMES)
        if unknown:
            raise ParamError(f"unknown features {sorted(unknown)}")
    if not subset:
        raise ParamError("empty feature subset")
    for sample in samples:
        sample.require(subset)

    series = {name: samples[feature_medoid(samples, name, band_radius)]
              .series[name] for name in subset}
    probe = Template(series=series, mu=0.0, sigma=0.0, feature_subset=subset,
                     z=z, purpose=purpose, band_radius=band_radius)
    dists = np.array([multi_dtw(probe, s) for s in samples])
    return Template(series=series, mu=float(dists.mean()),
                    sigma=float(dists.std()), feature_subset=subset, z=z,
                    purpose=purpose, band_radius=band_radius)


STAGE_SYMBOL = "symbol-check"
STAGE_USER = "user-check"


@dataclass(frozen=True)
class Decision:
    accepted: bool
    symbol: str | None           # matched (or assumed) symbol
    stage: str | None            # failing stage on reject, None on accept
    sym_distance: float
    user_distance: float | None  # None when rejected before the user check


@dataclass(frozen=True)
class TemplateBank:
    """Per-symbol shape and dynamics templates for one user."""
    sym_templates: dict[str, Template]
    user_templates: dict[str, Template]

    def __post_init__(self):
        if set(self.sym_templates) != set(self.user_templates):
            raise DataError("shape/dynamics template symbol sets differ")
        if not self.sym_templates:
            raise DataError("template bank is empty")

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(sorted(self.sym_templates))

    def to_json(self) -> str:
        return json.dumps({
            sym: {"sym": json.loads(self.sym_templates[sym].to_json()),
                  "user": json.loads(self.user_templates[sym].to_json())}
            for sym in self.sym_templates
        })

    @classmethod
    def from_json(cls, text: str) -> "TemplateBank":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"bad template bank payload: {exc}") from exc
        sym_t, user_t = {}, {}
        for sym, entry in obj.items():
            sym_t[sym] = Template.from_json(json.dumps(entry["sym"]))
            user_t[sym] = Template.from_json(json.dumps(entry["user"]))
        return cls(sym_templates=sym_t, user_templates=user_t)


def classify(rendering: FeatureSet, bank: TemplateBank,
             expected: str | None = None) -> Decision:
    if expected is not None:
        if expected not in bank.sym_templates:
            raise DataError(f"no templates for symbol {expected!r}")
        symbol = expected
        sym_dist = multi_dtw(bank.sym_templates[symbol], rendering)
    else:
        # No target symbol known: assume the nearest shape template.
        dists = {sym: multi_dtw(t, rendering)
                 for sym, t in bank.sym_templates.items()}
        symbol = min(sorted(dists), key=dists.get)
        sym_dist = dists[symbol]
    if sym_dist > bank.sym_templates[symbol].threshold:
        return Decision(accepted=False, symbol=symbol, stage=STAGE_SYMBOL,
                        sym_distance=sym_dist, user_distance=None)
    user_dist = multi_dtw(bank.user_templates[symbol], rendering)
    if user_dist > bank.user_templates[symbol].threshold:
        return Decision(accepted=False, symbol=symbol, stage=STAGE_USER,
                        sym_distance=sym_dist, user_distance=user_dist)
    return Decision(accepted=True, symbol=symbol, stage=None,
                    sym_distance=sym_dist, user_distance=user_dist)
