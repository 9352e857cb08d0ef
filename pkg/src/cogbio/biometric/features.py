"""Per-trace feature extraction.

Every feature is emitted as a time series so one distance machinery covers
them all; scalar shape statistics (extents, width/height, area, aspect)
become running-prefix series. Series are z-score normalized per trace;
a constant series maps to all zeros rather than dividing by zero.

Touch channels that the device did not report (pressure, size, motion)
simply produce no series; callers work with the intersection of available
features.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError
from .trace import Trace

TOUCH_NAMES = ("x", "y", "dx", "dy", "vx", "vy", "ax", "ay",
               "p", "dp", "s", "ds", "force", "action")
STYLO_NAMES = ("top", "bottom", "left", "right", "width", "height",
               "area", "aspect", "slope_angle", "path_angle", "curvature")
MOTION_NAMES = ("rot_x", "rot_y", "rot_z",
                "gyro_x", "gyro_y", "gyro_z",
                "accel_x", "accel_y", "accel_z",
                "grav_x", "grav_y", "grav_z",
                "lin_accel_x", "lin_accel_y", "lin_accel_z")
FEATURE_NAMES = TOUCH_NAMES + STYLO_NAMES + MOTION_NAMES  # 40 in total

# The symbol-identity check uses coordinates only.
SYM_FEATURES = ("x", "y")

_ACTION_CODE = {"down": 0.0, "move": 1.0, "up": 2.0}


@dataclass(frozen=True)
class FeatureSet:
    series: dict[str, np.ndarray]
    symbol_label: str | None = None
    user_label: str | None = None

    @property
    def available(self) -> frozenset[str]:
        return frozenset(self.series)

    def require(self, names) -> None:
        for name in names:
            if name not in self.series:
                raise DataError(f"feature {name!r} not available in sample")


def zscore(series: np.ndarray) -> np.ndarray:
    sd = float(series.std())
    if sd == 0.0:
        return np.zeros_like(series)
    return (series - series.mean()) / sd


def _signed_angle(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    dot = u[:, 0] * v[:, 0] + u[:, 1] * v[:, 1]
    return np.arctan2(cross, dot)


def raw_feature_series(trace: Trace) -> dict[str, np.ndarray]:
    """All derivable series before normalization."""
    ev = trace.events
    if len(ev) < 2:
        raise DataError("need at least 2 samples to derive features")
    t = np.array([e.t for e in ev], dtype=np.float64)
    x = np.array([e.x for e in ev], dtype=np.float64)
    y = np.array([e.y for e in ev], dtype=np.float64)
    if np.any(np.diff(t) <= 0):
        # Derivatives need distinct timestamps; spread ties by a ramp far
        # below the sampling period.
        t = t + np.arange(len(t)) * 1e-6

    out: dict[str, np.ndarray] = {"x": x, "y": y}
    out["dx"] = np.diff(x, prepend=x[0])
    out["dy"] = np.diff(y, prepend=y[0])
    out["vx"] = np.gradient(x, t)
    out["vy"] = np.gradient(y, t)
    out["ax"] = np.gradient(out["vx"], t)
    out["ay"] = np.gradient(out["vy"], t)
    out["action"] = np.array([_ACTION_CODE[e.action] for e in ev])

    pressures = [e.p for e in ev]
    if all(p is not None for p in pressures):
        p = np.array(pressures, dtype=np.float64)
        out["p"] = p
        out["dp"] = np.diff(p, prepend=p[0])
    sizes = [e.s for e in ev]
    if all(s is not None for s in sizes):
        s = np.array(sizes, dtype=np.float64)
        out["s"] = s
        out["ds"] = np.diff(s, prepend=s[0])
    if "p" in out and "s" in out:
        out["force"] = out["p"] * out["s"]

    out["top"] = np.maximum.accumulate(y)
    out["bottom"] = np.minimum.accumulate(y)
    out["left"] = np.minimum.accumulate(x)
    out["right"] = np.maximum.accumulate(x)
    out["width"] = out["right"] - out["left"]
    out["height"] = out["top"] - out["bottom"]
    out["area"] = out["width"] * out["height"]
    out["aspect"] = np.divide(out["width"], out["height"],
                              out=np.zeros_like(x),
                              where=out["height"] > 0)

    seg = np.stack([np.diff(x), np.diff(y)], axis=1)      # len-1 segments
    out["slope_angle"] = np.arctan2(seg[:, 1], seg[:, 0])
    turn = _signed_angle(seg[:-1], seg[1:])               # between segments
    out["path_angle"] = np.concatenate(([0.0], turn))
    seg_len = np.hypot(seg[1:, 0], seg[1:, 1])
    curv = np.divide(turn, seg_len, out=np.zeros_like(turn),
                     where=seg_len > 0)
    out["curvature"] = np.concatenate(([0.0], curv))

    motions = [e.motion for e in ev]
    if all(m is not None for m in motions):
        block = np.array(motions, dtype=np.float64)
        for idx, name in enumerate(MOTION_NAMES):
            out[name] = block[:, idx]
    return out


def extract_features(trace: Trace, normalize: bool = True) -> FeatureSet:
    raw = raw_feature_series(trace)
    series = {name: zscore(arr) if normalize else arr
              for name, arr in raw.items() if name in FEATURE_NAMES}
    return FeatureSet(series=series, symbol_label=trace.symbol_label,
                      user_label=trace.user_label)
