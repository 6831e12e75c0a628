"""Parameter-keyed on-disk cache.

Each entry is a payload file (the same JSON the reports emit) plus a
``.meta.json`` sidecar holding the key, the format version and a sha256 of
the payload. Writes go to a temp file and are renamed into place.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

from .strata import SUMMARY_VERSION, StrataSummary

FORMAT_VERSION = 1
log = logging.getLogger(__name__)


class ResultCache:
    def __init__(self, root, version: int = FORMAT_VERSION):
        self.root = Path(root)
        self.version = version
        self.root.mkdir(parents=True, exist_ok=True)

    def _paths(self, key: str):
        digest = hashlib.sha256(f"v{self.version}|{key}".encode()).hexdigest()[:32]
        return self.root / f"{digest}.json", self.root / f"{digest}.meta.json"

    def get(self, key: str) -> Optional[str]:
        payload_path, meta_path = self._paths(key)
        if not meta_path.exists():
            return None
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            payload = payload_path.read_bytes()
            if meta.get("key") != key or meta.get("version") != self.version:
                raise ValueError("key/version mismatch")
            if hashlib.sha256(payload).hexdigest() != meta.get("sha256"):
                raise ValueError("checksum mismatch")
            return payload.decode("utf-8")
        except (OSError, ValueError) as exc:
            log.warning("ignoring corrupt cache entry %s (%s); recomputing", payload_path.name, exc)
            return None

    def _atomic_write(self, path: Path, data: bytes) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def put(self, key: str, text: str) -> None:
        payload_path, meta_path = self._paths(key)
        data = text.encode("utf-8")
        meta = {"key": key, "version": self.version, "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)}
        self._atomic_write(payload_path, data)
        self._atomic_write(meta_path, (json.dumps(meta, sort_keys=True) + "\n").encode("utf-8"))

    @staticmethod
    def summary_key(x: int) -> str:
        return f"summary|x={x}|sieve=segmented-phi|summary_version={SUMMARY_VERSION}"

    def get_summary(self, x: int) -> Optional[StrataSummary]:
        text = self.get(self.summary_key(x))
        if text is None:
            return None
        try:
            return StrataSummary.from_json(text)
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring unreadable summary for x=%d (%s)", x, exc)
            return None

    def put_summary(self, summ: StrataSummary) -> None:
        self.put(self.summary_key(summ.x), summ.to_json())
