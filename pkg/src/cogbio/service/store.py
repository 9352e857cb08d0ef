"""Append-only JSON-lines persistence.

One record per line; writes are serialized and flushed so a crash loses at
most the record being written. No record is ever rewritten; state is
reconstructed by replaying the file from the top.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from ..errors import DataError


class Store:
    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, record: dict) -> None:
        line = json.dumps(record, separators=(",", ":"))
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def load(self) -> list[dict]:
        if not self.path.exists():
            return []
        records = []
        with self._lock:
            text = self.path.read_text(encoding="utf-8")
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise DataError(
                    f"{self.path}:{lineno}: corrupt record: {exc}") from exc
        return records
