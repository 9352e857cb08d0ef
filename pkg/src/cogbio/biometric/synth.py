"""Synthetic handwriting traces.

No human data ships with this project, so tests and simulations draw from a
parametric generator instead: each symbol has a fixed base shape (a seeded
control polygon), each user gets persistent deviations from it (control
point offsets, an affine slant, timing/pressure/size profiles, motion
sensor profile), and each rendering adds small Gaussian jitter scaled by
``noise``. At noise 0 renderings of a (symbol, user) pair are identical.

The generated statistics are not claimed to match human handwriting; the
generator exists so self-match distances are small, cross-user distances
are larger, and cross-symbol distances are larger still.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from ..errors import ParamError
from .trace import MOTION_CHANNELS, TouchEvent, Trace

N_CTRL = 8
CANVAS = 300.0
MARGIN = 20.0


def symbol_control_points(symbol: str, n_ctrl: int = N_CTRL) -> np.ndarray:
    """Deterministic base shape for a symbol name, inside the unit box."""
    rng = np.random.default_rng(zlib.crc32(symbol.encode("utf-8")))
    pts = np.cumsum(rng.normal(size=(n_ctrl, 2)), axis=0)
    pts -= pts.min(axis=0)
    span = pts.max(axis=0)
    span[span == 0] = 1.0
    return pts / span


@dataclass(frozen=True)
class UserStyle:
    offsets: dict[str, np.ndarray]  # per-symbol control point deviations
    transform: np.ndarray           # 2x2 slant/scale applied to coordinates
    speed: float
    timing_phase: float
    pressure_base: float
    pressure_amp: float
    size_base: float
    size_amp: float
    motion_amp: np.ndarray
    motion_freq: np.ndarray
    motion_phase: np.ndarray


def sample_user_style(symbols, rng: np.random.Generator,
                      spread: float = 0.06) -> UserStyle:
    """Draw a persistent handwriting personality.

    ``spread`` controls how far users sit from the shared base shapes and
    therefore how separable they are from each other.
    """
    names = list(symbols)
    offsets = {name: rng.normal(0.0, spread, size=(N_CTRL, 2))
               for name in names}
    angle = rng.uniform(-0.15, 0.15)
    scale = rng.uniform(0.85, 1.15, size=2)
    rot = np.array([[np.cos(angle), -np.sin(angle)],
                    [np.sin(angle), np.cos(angle)]])
    return UserStyle(
        offsets=offsets,
        transform=rot @ np.diag(scale),
        speed=rng.uniform(0.75, 1.3),
        timing_phase=rng.uniform(0, 2 * np.pi),
        pressure_base=rng.uniform(0.35, 0.65),
        pressure_amp=rng.uniform(0.05, 0.15),
        size_base=rng.uniform(0.25, 0.5),
        size_amp=rng.uniform(0.03, 0.1),
        motion_amp=rng.uniform(0.05, 0.25, size=MOTION_CHANNELS),
        motion_freq=rng.uniform(0.5, 2.5, size=MOTION_CHANNELS),
        motion_phase=rng.uniform(0, 2 * np.pi, size=MOTION_CHANNELS),
    )


def render_trace(symbol: str, style: UserStyle, rng: np.random.Generator,
                 noise: float = 1.0, n_points: int = 80,
                 include_pressure: bool = True, include_motion: bool = True,
                 user_label: str | None = None,
                 session_label: str | None = None) -> Trace:
    if symbol not in style.offsets:
        raise ParamError(f"style has no offsets for symbol {symbol!r}")
    ctrl = (symbol_control_points(symbol) + style.offsets[symbol]
            + noise * rng.normal(0.0, 0.012, size=(N_CTRL, 2)))
    u_ctrl = np.linspace(0.0, 1.0, len(ctrl))
    spline = CubicSpline(u_ctrl, ctrl, axis=0)
    u = np.linspace(0.0, 1.0, n_points)
    pts = spline(u) @ style.transform.T * (CANVAS - 2 * MARGIN) + MARGIN

    base_dt = 600.0 / style.speed / n_points
    dt = base_dt * (1.0 + 0.25 * np.sin(2 * np.pi * 2 * u + style.timing_phase))
    dt = np.maximum(dt + noise * rng.normal(0.0, 0.5, size=n_points), 0.05)
    t = np.cumsum(dt) - dt[0]

    pressure = np.clip(style.pressure_base
                       + style.pressure_amp * np.sin(np.pi * u)
                       + noise * rng.normal(0.0, 0.015, size=n_points),
                       0.02, 1.0)
    size = np.clip(style.size_base + style.size_amp * np.sin(np.pi * u)
                   + noise * rng.normal(0.0, 0.01, size=n_points), 0.02, 1.0)
    motion = (style.motion_amp[None, :]
              * np.sin(2 * np.pi * style.motion_freq[None, :] * u[:, None]
                       + style.motion_phase[None, :])
              + noise * rng.normal(0.0, 0.01, size=(n_points, MOTION_CHANNELS)))

    events = []
    for i in range(n_points):
        action = "down" if i == 0 else ("up" if i == n_points - 1 else "move")
        events.append(TouchEvent(
            t=float(t[i]), x=float(pts[i, 0]), y=float(pts[i, 1]),
            p=float(pressure[i]) if include_pressure else None,
            s=float(size[i]) if include_pressure else None,
            action=action,
            motion=tuple(float(v) for v in motion[i])
            if include_motion else None,
        ))
    return Trace(events=tuple(events), symbol_label=symbol,
                 user_label=user_label, session_label=session_label)
