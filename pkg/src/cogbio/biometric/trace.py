"""Raw touch traces and their line-oriented file format.

A trace file is JSON lines, one event per line:

    {"t": 12.5, "x": 104.0, "y": 88.2, "p": 0.41, "s": 0.22, "a": "move",
     "m": [15 floats] or null}

``p`` (pressure) and ``s`` (contact size) are null when the capture device
does not report them; ``m`` is an optional 15-channel motion-sensor block
(rotation 3, gyroscope 3, accelerometer 3, gravity 3, linear acceleration 3).
A rendering file is the same with one header line in front:

    {"user": "alice", "symbol": "fogy", "session": "s-17"}

Parsing accepts both shapes and round-trips byte-stable values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import DataError

ACTIONS = ("down", "move", "up")
MOTION_CHANNELS = 15


@dataclass(frozen=True)
class TouchEvent:
    t: float                      # milliseconds since trace start
    x: float
    y: float
    p: float | None = None        # pressure in [0, 1]
    s: float | None = None        # contact size in [0, 1]
    action: str = "move"
    motion: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.action not in ACTIONS:
            raise DataError(f"unknown action {self.action!r}")
        for name, value in (("p", self.p), ("s", self.s)):
            if value is not None and not 0.0 <= value <= 1.0:
                raise DataError(f"{name}={value} outside [0, 1]")
        if self.motion is not None and len(self.motion) != MOTION_CHANNELS:
            raise DataError(
                f"motion block has {len(self.motion)} channels, "
                f"expected {MOTION_CHANNELS}")


@dataclass(frozen=True)
class Trace:
    events: tuple[TouchEvent, ...]
    symbol_label: str | None = None
    user_label: str | None = None
    session_label: str | None = None

    def __post_init__(self):
        ev = self.events
        if len(ev) < 2:
            raise DataError(f"trace needs >= 2 events, got {len(ev)}")
        if ev[0].action != "down":
            raise DataError("first event must be a touch-down")
        if ev[-1].action != "up":
            raise DataError("last event must be a touch-up")
        for a, b in zip(ev, ev[1:]):
            if b.t < a.t:
                raise DataError(f"time goes backwards: {a.t} -> {b.t}")

    def __len__(self) -> int:
        return len(self.events)


def _event_to_obj(event: TouchEvent) -> dict:
    return {
        "t": event.t, "x": event.x, "y": event.y,
        "p": event.p, "s": event.s, "a": event.action,
        "m": list(event.motion) if event.motion is not None else None,
    }


def _event_from_obj(obj: dict, lineno: int) -> TouchEvent:
    if not isinstance(obj, dict):
        raise DataError(f"line {lineno}: event is not an object")
    missing = {"t", "x", "y", "a"} - set(obj)
    if missing:
        raise DataError(f"line {lineno}: event missing {sorted(missing)}")
    try:
        motion = obj.get("m")
        return TouchEvent(
            t=float(obj["t"]), x=float(obj["x"]), y=float(obj["y"]),
            p=None if obj.get("p") is None else float(obj["p"]),
            s=None if obj.get("s") is None else float(obj["s"]),
            action=obj["a"],
            motion=None if motion is None else tuple(float(v) for v in motion),
        )
    except (TypeError, ValueError) as exc:
        raise DataError(f"line {lineno}: {exc}") from exc
    except DataError as exc:
        raise DataError(f"line {lineno}: {exc}") from exc


def render_header(user: str | None, symbol: str | None,
                  session: str | None) -> str:
    return json.dumps({"user": user, "symbol": symbol, "session": session})


def trace_to_jsonl(trace: Trace, with_header: bool | None = None) -> str:
    """Serialize a trace; the header line is included when any label is set
    (or forced either way with ``with_header``)."""
    labeled = (trace.user_label is not None or trace.symbol_label is not None
               or trace.session_label is not None)
    lines = []
    if with_header if with_header is not None else labeled:
        lines.append(render_header(trace.user_label, trace.symbol_label,
                                   trace.session_label))
    lines.extend(json.dumps(_event_to_obj(e)) for e in trace.events)
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> Trace:
    """Parse a trace or rendering file (header line optional)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataError("empty trace file")
    try:
        first = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise DataError(f"line 1: invalid JSON: {exc}") from exc
    if not isinstance(first, dict):
        raise DataError("line 1: expected a JSON object")

    user = symbol = session = None
    start = 0
    if "t" not in first:  # header line
        unknown = set(first) - {"user", "symbol", "session"}
        if unknown:
            raise DataError(f"line 1: unknown header fields {sorted(unknown)}")
        user, symbol, session = (first.get("user"), first.get("symbol"),
                                 first.get("session"))
        start = 1

    events = []
    for offset, line in enumerate(lines[start:], start=start + 1):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {offset}: invalid JSON: {exc}") from exc
        events.append(_event_from_obj(obj, offset))
    return Trace(events=tuple(events), symbol_label=symbol, user_label=user,
                 session_label=session)
