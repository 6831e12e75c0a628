"""Segmented sieves for phi and omega, prime counting, primality, 2-adic valuation."""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from ._backend import kernels
from .config import DEFAULT, RunConfig
from .errors import InvalidInput, LimitExceeded, RangeTooLarge

U63 = 1 << 63


@dataclass(frozen=True)
class PhiSegment:
    lo: int
    values: np.ndarray  # values[i] = phi(lo + i)

    @property
    def hi(self) -> int:
        return self.lo + len(self.values)

    def __getitem__(self, n: int) -> int:
        return int(self.values[n - self.lo])


@dataclass(frozen=True)
class OmegaSegment:
    lo: int
    values: np.ndarray  # values[i] = omega(lo + i)

    @property
    def hi(self) -> int:
        return self.lo + len(self.values)


_base = {"limit": 1, "primes": np.empty(0, dtype=np.uint32)}


def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit, as uint32. The largest table built so far is kept."""
    if limit > _base["limit"]:
        _, primes = kernels.spf_sieve(max(limit, 2 * _base["limit"], 1 << 16))
        _base["limit"] = max(limit, 2 * _base["limit"], 1 << 16)
        _base["primes"] = primes
    primes = _base["primes"]
    return primes[: np.searchsorted(primes, limit, side="right")]


def _primes_for(hi: int) -> np.ndarray:
    return base_primes(math.isqrt(max(hi - 1, 1)) + 1)


def _check_range(lo: int, hi: int) -> None:
    if lo < 1 or lo >= hi:
        raise InvalidInput(f"invalid range [{lo}, {hi})")
    if hi > U63:
        raise LimitExceeded(f"hi={hi} exceeds 2^63")


def _segments(lo: int, hi: int, size: int):
    for a in range(lo, hi, size):
        yield a, min(a + size, hi)


def _run_segments(fn, lo: int, hi: int, config: RunConfig) -> Iterator:
    """Apply ``fn(a, b, primes)`` to consecutive blocks, yielding results in order.

    With several workers a bounded window of blocks is in flight at once; the
    compiled kernels release the GIL so threads overlap.
    """
    primes = _primes_for(hi)
    blocks = _segments(lo, hi, config.segment_size)
    if config.workers <= 1:
        for a, b in blocks:
            yield a, fn(a, b, primes)
        return
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        window: deque = deque()
        for a, b in blocks:
            window.append((a, pool.submit(fn, a, b, primes)))
            if len(window) >= 2 * config.workers:
                a0, fut = window.popleft()
                yield a0, fut.result()
        while window:
            a0, fut = window.popleft()
            yield a0, fut.result()


def iter_phi_segments(lo: int, hi: int, config: RunConfig = DEFAULT) -> Iterator[PhiSegment]:
    _check_range(lo, hi)
    for a, values in _run_segments(kernels.phi_segment, lo, hi, config):
        yield PhiSegment(a, values)


def phi_range(lo: int, hi: int, config: RunConfig = DEFAULT, split: bool = True) -> PhiSegment:
    """phi(n) for n in [lo, hi)."""
    _check_range(lo, hi)
    size = hi - lo
    if 8 * size > config.memory_cap_bytes or (size > config.segment_size and not split):
        raise RangeTooLarge(f"{size} values exceed the configured segment/memory cap")
    parts = [seg.values for seg in iter_phi_segments(lo, hi, config)]
    return PhiSegment(lo, parts[0] if len(parts) == 1 else np.concatenate(parts))


def omega_range(lo: int, hi: int, config: RunConfig = DEFAULT) -> OmegaSegment:
    _check_range(lo, hi)
    if hi - lo > config.memory_cap_bytes:
        raise RangeTooLarge(f"{hi - lo} values exceed the memory cap")
    parts = [v for _, v in _run_segments(kernels.omega_segment, lo, hi, config)]
    return OmegaSegment(lo, np.concatenate(parts))


def phi(n: int) -> int:
    return phi_range(n, n + 1)[n]


def phi_table_direct(n_max: int) -> np.ndarray:
    """phi(0..n_max) in one unsegmented pass; an independent path for cross-checks."""
    table = np.arange(n_max + 1, dtype=np.int64)
    for p in range(2, n_max + 1):
        if table[p] == p:
            table[p::p] -= table[p::p] // p
    return table


def _check_limit(x: int, config: RunConfig) -> None:
    if x > config.sieve_limit:
        raise LimitExceeded(f"x={x} exceeds sieve limit {config.sieve_limit}")


@lru_cache(maxsize=512)
def _prime_pi(x: int, segment_size: int) -> int:
    if x < 2:
        return 0
    primes = _primes_for(x + 1)
    total = 0
    for a, b in _segments(1, x + 1, segment_size):
        total += int(np.count_nonzero(kernels.prime_flags(a, b, primes)))
    return total


def prime_pi(x: int, config: RunConfig = DEFAULT) -> int:
    """Number of primes <= x."""
    _check_limit(x, config)
    return _prime_pi(int(x), config.segment_size)


@lru_cache(maxsize=64)
def _omega_counts(x: int, segment_size: int) -> tuple:
    counts = np.zeros(64, dtype=np.int64)
    if x >= 1:
        cfg = DEFAULT.with_(segment_size=segment_size, workers=1)
        for _, om in _run_segments(kernels.omega_segment, 1, x + 1, cfg):
            counts += np.bincount(om, minlength=64)[:64]
    return tuple(int(c) for c in counts)


def omega_counts(x: int, config: RunConfig = DEFAULT) -> tuple:
    """``counts[i] = #{1 <= n <= x : omega(n) = i}`` for i < 64."""
    _check_limit(x, config)
    return _omega_counts(int(x), config.segment_size)


def prime_pi_i(x: int, i: int, config: RunConfig = DEFAULT) -> int:
    """Number of n <= x with exactly i distinct prime factors."""
    if i < 1:
        raise InvalidInput("i must be >= 1")
    counts = omega_counts(x, config)
    return counts[i] if i < len(counts) else 0


# Strong-probable-prime bases 2..37: no composite below 3.3e24 passes all
# twelve (Sorenson and Webster, "Strong pseudoprimes to twelve prime bases",
# Math. Comp. 86 (2017)), which covers every 64-bit input.
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality for n < 2^64 (and far beyond, see MR_BASES)."""
    if n < 2:
        return False
    for p in MR_BASES:
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in MR_BASES:
        y = pow(a, d, n)
        if y == 1 or y == n - 1:
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def v2(n: int) -> int:
    """2-adic valuation of n >= 1."""
    if n < 1:
        raise InvalidInput("v2 needs n >= 1")
    return (n & -n).bit_length() - 1


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, exact."""
    if n < 2 or k == 1:
        return n
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def trial_factor(n: int, primes: Optional[np.ndarray] = None) -> dict:
    """Factor by trial division; fine for n up to ~10^12."""
    out = {}
    for p in (primes if primes is not None else base_primes(math.isqrt(n) + 1)):
        p = int(p)
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out
