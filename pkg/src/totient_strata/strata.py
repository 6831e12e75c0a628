"""Stratified totient statistics.

One sweep sieves phi(n) for every n up to ``preimage_bound(x)`` and bins the
values m <= x; the multiplicity table is then read off stratum by stratum,
a stratum being the residue class m = 2^l mod 2^(l+1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from ._backend import kernels
from .config import DEFAULT, RunConfig
from .errors import EmptyCandidates, InvalidInput, LimitExceeded, NonTotient, PDividesPreimage, PNotThreeModFour
from .invphi import inverse_phi, preimage_bound
from .sieve import is_prime, iter_phi_segments, phi_table_direct

SUMMARY_VERSION = 1


@dataclass(frozen=True)
class StratumStats:
    x: int
    ell: int
    v_count: int
    s_sum: int
    max_mult: int
    histogram: dict = field(default_factory=dict)  # multiplicity -> number of totients

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "ell": self.ell,
            "v_count": self.v_count,
            "s_sum": self.s_sum,
            "max_mult": self.max_mult,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StratumStats":
        hist = {int(k): int(v) for k, v in d["histogram"].items()}
        return cls(int(d["x"]), int(d["ell"]), int(d["v_count"]), int(d["s_sum"]), int(d["max_mult"]), hist)


@dataclass(frozen=True)
class StrataSummary:
    """Everything the tables need at one x: V(x), S(x) and every nonempty stratum."""

    x: int
    bound: int  # preimage_bound(x); the sweep covers at least this n-range
    v_total: int  # V(x), counting m = 1
    n_count: int  # S(x) = #{n : phi(n) <= x}
    strata: tuple  # StratumStats for l = 1 .. k0(x)

    def stratum(self, ell: int) -> StratumStats:
        if ell < 1:
            raise InvalidInput("strata start at l = 1")
        if ell > len(self.strata):
            return StratumStats(self.x, ell, 0, 0, 0, {})
        return self.strata[ell - 1]

    def to_json(self) -> str:
        body = {
            "version": SUMMARY_VERSION,
            "x": self.x,
            "bound": self.bound,
            "v_total": self.v_total,
            "n_count": self.n_count,
            "strata": [s.to_dict() for s in self.strata],
        }
        return json.dumps(body, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "StrataSummary":
        d = json.loads(text)
        if d.get("version") != SUMMARY_VERSION:
            raise ValueError("summary version mismatch")
        strata = tuple(StratumStats.from_dict(s) for s in d["strata"])
        return cls(int(d["x"]), int(d["bound"]), int(d["v_total"]), int(d["n_count"]), strata)


def k0(x: int) -> int:
    """floor(log2 x), by bit length."""
    if x < 2:
        raise InvalidInput("k0 needs x >= 2")
    return x.bit_length() - 1


class _Acc:
    def __init__(self, x: int):
        self.x = x
        self.v_total = 0
        self.n_count = 0
        depth = k0(x) if x >= 2 else 0
        self.v = [0] * (depth + 1)
        self.s = [0] * (depth + 1)
        self.mx = [0] * (depth + 1)
        self.hist = [dict() for _ in range(depth + 1)]

    def add_chunk(self, counts: np.ndarray, mlo: int) -> None:
        upto = min(mlo + len(counts), self.x + 1)
        if upto <= mlo:
            return
        arr = counts[: upto - mlo]
        self.v_total += int(np.count_nonzero(arr))
        self.n_count += int(arr.sum(dtype=np.uint64))
        for ell in range(1, len(self.v)):
            step = 1 << (ell + 1)
            sl = arr[((1 << ell) - mlo) % step :: step]
            nz = sl[sl > 0]
            if nz.size == 0:
                continue
            self.v[ell] += int(nz.size)
            self.s[ell] += int(nz.sum(dtype=np.uint64))
            self.mx[ell] = max(self.mx[ell], int(nz.max()))
            keys, cnt = np.unique(nz, return_counts=True)
            h = self.hist[ell]
            for k, c in zip(keys.tolist(), cnt.tolist()):
                h[k] = h.get(k, 0) + c

    def finish(self, bound: int) -> StrataSummary:
        strata = tuple(
            StratumStats(self.x, ell, self.v[ell], self.s[ell], self.mx[ell], dict(sorted(self.hist[ell].items())))
            for ell in range(1, len(self.v))
        )
        return StrataSummary(self.x, bound, self.v_total, self.n_count, strata)


def _chunk_len(x: int, config: RunConfig) -> int:
    room = config.memory_cap_bytes - 16 * config.segment_size
    return max(1, min(x + 1, room // 4))


def sweep(xs: Iterable[int], config: RunConfig = DEFAULT) -> dict:
    """Summaries for every x in ``xs`` from a single sieve up to the largest bound.

    When the count table for max(xs) would exceed the memory cap, the totient
    range is split into chunks and the n-range is swept once per chunk.
    """
    xs = sorted(set(int(x) for x in xs))
    if not xs:
        return {}
    if xs[0] < 1:
        raise InvalidInput("x must be >= 1")
    top = xs[-1]
    bound = preimage_bound(top)
    if bound > config.sieve_limit:
        raise LimitExceeded(f"preimage bound {bound} for x={top} exceeds sieve limit {config.sieve_limit}")
    accs = {x: _Acc(x) for x in xs}
    step = _chunk_len(top, config)
    for mlo in range(0, top + 1, step):
        mhi = min(mlo + step, top + 1)
        counts = np.zeros(mhi - mlo, dtype=np.uint32)
        for seg in iter_phi_segments(1, bound + 1, config):
            kernels.accumulate(seg.values, counts, mlo, mhi)
        for acc in accs.values():
            acc.add_chunk(counts, mlo)
    return {x: acc.finish(preimage_bound(x)) for x, acc in accs.items()}


_memo: dict = {}


def summaries(xs: Iterable[int], config: RunConfig = DEFAULT, cache=None) -> dict:
    """Like ``sweep`` but reuses in-process results and an optional disk cache."""
    xs = sorted(set(int(x) for x in xs))
    out, todo = {}, []
    for x in xs:
        key = (x, config.sieve_limit)
        if key in _memo:
            out[x] = _memo[key]
            continue
        hit = cache.get_summary(x) if cache is not None else None
        if hit is not None:
            out[x] = _memo[key] = hit
        else:
            todo.append(x)
    if todo:
        for x, summ in sweep(todo, config).items():
            _memo[(x, config.sieve_limit)] = out[x] = summ
            if cache is not None:
                cache.put_summary(summ)
    return out


def summary(x: int, config: RunConfig = DEFAULT, cache=None) -> StrataSummary:
    return summaries([x], config, cache)[x]


def clear_memo() -> None:
    _memo.clear()


def stratum_stats(x: int, ell_max: int, config: RunConfig = DEFAULT, cache=None):
    """``(stats for l = 1..ell_max, V(x))``."""
    if x < 2:
        raise InvalidInput("stratum_stats needs x >= 2")
    if ell_max > k0(x):
        raise InvalidInput(f"ell_max={ell_max} exceeds k0({x})={k0(x)}")
    summ = summary(x, config, cache)
    return [summ.stratum(ell) for ell in range(1, ell_max + 1)], summ.v_total


def v1_split(x: int, config: RunConfig = DEFAULT, cache=None) -> tuple:
    """(#totients 2 mod 4 <= x of multiplicity 2, of multiplicity 4); m = 2 is in neither."""
    if x < 2:
        return 0, 0
    hist = summary(x, config, cache).stratum(1).histogram
    return hist.get(2, 0), hist.get(4, 0)


def max_mult(x: int, ell: int, config: RunConfig = DEFAULT, cache=None) -> int:
    if x < 2:
        return 0
    return summary(x, config, cache).stratum(ell).max_mult


def attained_multiplicities(x: int, ell: int, config: RunConfig = DEFAULT, cache=None) -> tuple:
    if x < 2:
        return ()
    return tuple(sorted(summary(x, config, cache).stratum(ell).histogram))


@dataclass(frozen=True)
class EllOfX:
    x: int
    candidates: tuple  # all l >= 1 with 2^l S^l(x) > V(x)
    ell: Optional[int]  # least candidate in [2, k0(x)]


def ell_of_x(x: int, config: RunConfig = DEFAULT, cache=None) -> EllOfX:
    if x < 4:
        raise InvalidInput("ell_of_x needs x >= 4")
    summ = summary(x, config, cache)
    cands = tuple(s.ell for s in summ.strata if (s.s_sum << s.ell) > summ.v_total)
    if not cands:
        raise EmptyCandidates(f"no stratum with 2^l S^l({x}) > V({x})")
    restricted = [c for c in cands if c >= 2]
    return EllOfX(x, cands, min(restricted) if restricted else None)


def lift_totient(m: int, p: int, config: RunConfig = DEFAULT) -> int:
    """(p - 1) m for a prime p = 3 mod 4 dividing no preimage of m.

    n -> p n maps phi^{-1}(m) injectively into phi^{-1}((p - 1) m), and
    p - 1 = 2 mod 4 moves the totient up exactly one stratum.
    """
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    if p % 4 != 3:
        raise PNotThreeModFour(f"{p} is not 3 mod 4")
    pre = inverse_phi(m, config)
    if not pre.elements:
        raise NonTotient(f"{m} is not a totient")
    bad = [e for e in pre.elements if e % p == 0]
    if bad:
        raise PDividesPreimage(f"{p} divides {bad[0]} in phi^-1({m})")
    return (p - 1) * m


def direct_stratum_sums(x: int) -> dict:
    """S^l(x) as #{n : phi(n) <= x, v2(phi(n)) = l}, via one unsegmented sieve.

    Shares no code with ``sweep``; intended for x up to ~10^5.
    """
    table = phi_table_direct(preimage_bound(x))[1:]
    vals = table[table <= x]
    vals = vals[vals > 1]
    low = vals & -vals
    ells, cnt = np.unique(np.log2(low).astype(np.int64), return_counts=True)
    return {int(e): int(c) for e, c in zip(ells, cnt)}
