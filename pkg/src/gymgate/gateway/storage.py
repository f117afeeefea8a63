"""Append-only JSON-lines persistence.

One file per store, one record per line, every line schema-versioned with
"v": 1. Records are flushed and fsynced before `append` returns, so a store
that acknowledged a write survives a hard kill. A torn final line (crash
mid-write) is dropped on replay; corruption anywhere else is an error.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from gymgate.gateway.errors import StorageError

SCHEMA_VERSION = 1


class JsonlStore:
    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._fh = None

    def replay(self) -> list[dict]:
        """All intact records, in append order."""
        if not self.path.exists():
            return []
        raw = self.path.read_bytes()
        records = []
        lines = raw.split(b"\n")
        # a well-formed file ends with a newline, so the final split element
        # is empty; anything else there is a torn write
        for i, line in enumerate(lines):
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                if i == len(lines) - 1:
                    break
                raise StorageError(f"{self.path}:{i + 1}: corrupt record: {exc}") from exc
            if not isinstance(record, dict) or record.get("v") != SCHEMA_VERSION:
                raise StorageError(f"{self.path}:{i + 1}: unsupported record version")
            records.append(record)
        return records

    def append(self, record: dict) -> None:
        line = json.dumps({"v": SCHEMA_VERSION, **record}, separators=(",", ":"), sort_keys=True)
        with self._lock:
            if self._fh is None:
                self._fh = open(self.path, "ab")
            self._fh.write(line.encode("utf-8") + b"\n")
            self._fh.flush()
            os.fsync(self._fh.fileno())

    def close(self) -> None:
        with self._lock:
            if self._fh is not None:
                self._fh.close()
                self._fh = None
