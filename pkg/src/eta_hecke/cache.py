"""Versioned flat-file JSON cache with a content hash.

Each namespace lives in ``<dir>/<namespace>.json`` holding
``{"version", "sha256", "payload"}``. A file whose hash or version does not
match is ignored (and later overwritten), so corruption only costs a
recomputation.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from eta_hecke import __version__

log = logging.getLogger(__name__)

ENV_VAR = "ETA_HECKE_CACHE"
FORMAT = 1


def _digest(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def resolve_cache_dir(cli_value: str | None) -> Path | None:
    """The environment variable wins over the command line, per the CLI contract."""
    value = os.environ.get(ENV_VAR) or cli_value
    return Path(value) if value else None


class FlatCache:
    """String-keyed, string-valued store for one namespace."""

    def __init__(self, directory: str | os.PathLike | None, namespace: str):
        self.path = Path(directory) / f"{namespace}.json" if directory else None
        self.data: dict[str, str] = {}
        self._dirty = False
        if self.path is not None:
            self._load()

    @property
    def version(self) -> str:
        return f"{FORMAT}:{__version__}"

    def _load(self) -> None:
        try:
            raw = json.loads(self.path.read_text())
        except FileNotFoundError:
            return
        except (OSError, ValueError) as exc:
            log.warning("cache %s unreadable (%s); recomputing", self.path, exc)
            return
        if not isinstance(raw, dict) or raw.get("version") != self.version:
            log.warning("cache %s has another version; recomputing", self.path)
            return
        payload = raw.get("payload")
        if not isinstance(payload, dict) or raw.get("sha256") != _digest(payload):
            log.warning("cache %s failed its content hash; recomputing", self.path)
            return
        self.data = {str(k): str(v) for k, v in payload.items()}

    def get(self, key: str) -> str | None:
        return self.data.get(key)

    def put(self, key: str, value: str) -> None:
        if self.data.get(key) != value:
            self.data[key] = value
            self._dirty = True

    def flush(self) -> None:
        if self.path is None or not self._dirty:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        doc = {"version": self.version, "sha256": _digest(self.data), "payload": self.data}
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(json.dumps(doc, sort_keys=True))
        os.replace(tmp, self.path)
        self._dirty = False
