from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

CACHE_ENV = "TOTIENT_STRATA_CACHE"


def _default_workers() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return max(1, os.cpu_count() or 1)


@dataclass(frozen=True)
class RunConfig:
    sieve_limit: int = 1 << 31
    segment_size: int = 1 << 22
    memory_cap_bytes: int = 1 << 31
    workers: int = field(default_factory=_default_workers)
    cache_dir: Optional[Path] = None
    output_format: str = "csv"
    # largest m accepted by inverse_phi
    invphi_limit: int = 1 << 60

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.segment_size < 1:
            raise ValueError("segment_size must be >= 1")
        # a segment needs two 8-byte arrays
        if 16 * self.segment_size > self.memory_cap_bytes:
            raise ValueError("segment_size does not fit memory_cap_bytes")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    def with_(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    @classmethod
    def from_env(cls, **overrides) -> "RunConfig":
        if "cache_dir" not in overrides and os.environ.get(CACHE_ENV):
            overrides["cache_dir"] = Path(os.environ[CACHE_ENV])
        return cls(**overrides)


DEFAULT = RunConfig()
