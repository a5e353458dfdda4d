"""Content-addressed on-disk cache for Tate resolutions and SNF results.

Enabled by setting ``DGWB_CACHE_DIR``. Every entry is one JSON file named
after the digest of its input, holding ``{"kind", "input", "output"}``.
Writes go through a temporary file and an atomic rename, and all access
from this process is serialised by one lock. The cache is bypassed while
any mutant is injected, so faulty results never get persisted.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path

from . import mutants

ENV_VAR = "DGWB_CACHE_DIR"
FORMAT = 1

_lock = threading.Lock()


def digest_of(data) -> str:
    """First 16 hex digits of the SHA-256 of canonical JSON."""
    blob = json.dumps(data, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class ResultCache:
    def __init__(self, root):
        self.root = Path(root)

    def key(self, kind: str, payload) -> str:
        return digest_of({"format": FORMAT, "kind": kind, "input": payload})

    def path(self, kind: str, payload) -> Path:
        return self.root / f"{self.key(kind, payload)}.json"

    def get(self, kind: str, payload):
        path = self.path(kind, payload)
        with _lock:
            try:
                entry = json.loads(path.read_text())
            except (OSError, ValueError):
                return None
        # a digest collision (or a corrupted file) must never return foreign data
        if entry.get("kind") != kind or entry.get("input") != payload:
            return None
        return entry["output"]

    def put(self, kind: str, payload, output) -> None:
        entry = {"kind": kind, "input": payload, "output": output}
        path = self.path(kind, payload)
        with _lock:
            self.root.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            try:
                with os.fdopen(fd, "w") as fh:
                    json.dump(entry, fh, sort_keys=True, separators=(",", ":"))
                os.replace(tmp, path)
            except BaseException:
                Path(tmp).unlink(missing_ok=True)
                raise


def active_cache() -> ResultCache | None:
    """The cache named by ``DGWB_CACHE_DIR``, or ``None`` when disabled."""
    root = os.environ.get(ENV_VAR)
    if not root or mutants.any_active():
        return None
    return ResultCache(root)
