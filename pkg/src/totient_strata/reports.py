"""Table reproduction, invariant checks and CSV/JSON rendering."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT, RunConfig
from .invphi import Pattern, classify_2r, inverse_phi, preimage_bound, r_t_base_primes, r_t_members, r_t_prime_bound
from .sieve import omega_counts, phi_table_direct, prime_pi
from .strata import direct_stratum_sums, k0, summaries


class TableId(str, Enum):
    TABLE1 = "TABLE1"
    TABLEMAX = "TABLEMAX"
    TABLE2 = "TABLE2"
    CHECKS = "CHECKS"


HEADERS = {
    TableId.TABLE1: ("x", "pi", "v1_mult2", "v1_mult4", "ratio"),
    TableId.TABLEMAX: ("x", "ell", "max_mult"),
    TableId.TABLE2: ("x", "ell", "ratio"),
    TableId.CHECKS: ("check_id", "x", "status", "detail"),
}
TABLE1_DIGITS = 6
TABLE2_DIGITS = 4


@dataclass(frozen=True)
class ReportRow:
    table_id: TableId
    columns: tuple  # ((name, value), ...) in HEADERS order

    def __post_init__(self):
        names = tuple(n for n, _ in self.columns)
        if names != HEADERS[self.table_id]:
            raise ValueError(f"{self.table_id.value} columns must be {HEADERS[self.table_id]}, got {names}")

    @property
    def x(self) -> int:
        return int(self["x"])

    def __getitem__(self, name: str):
        for n, v in self.columns:
            if n == name:
                return v
        raise KeyError(name)

    def as_dict(self) -> dict:
        return dict(self.columns)


def truncated(num: int, den: int, digits: int) -> Decimal:
    """num/den truncated toward zero to ``digits`` decimals (num, den >= 0)."""
    q = num * 10**digits // den
    return Decimal(q).scaleb(-digits)


def _row(table_id: TableId, *values) -> ReportRow:
    return ReportRow(table_id, tuple(zip(HEADERS[table_id], values)))


def table1(x_list: Sequence[int], config: RunConfig = DEFAULT, cache=None) -> list:
    summ = summaries(x_list, config, cache)
    rows = []
    for x in x_list:
        hist = summ[x].stratum(1).histogram
        pi = prime_pi(x, config)
        two, four = hist.get(2, 0), hist.get(4, 0)
        rows.append(_row(TableId.TABLE1, x, pi, two, four, truncated(two, pi, TABLE1_DIGITS)))
    return rows


def table_max(x_list: Sequence[int], ell_range: Iterable[int], config: RunConfig = DEFAULT, cache=None) -> list:
    ells = list(ell_range)
    summ = summaries(x_list, config, cache)
    return [_row(TableId.TABLEMAX, x, ell, summ[x].stratum(ell).max_mult) for x in x_list for ell in ells]


def table_ratio(x_list: Sequence[int], ell_range: Iterable[int], config: RunConfig = DEFAULT, cache=None) -> list:
    """2^l S^l(x) / V(x), V(x) counting the totient 1."""
    ells = list(ell_range)
    summ = summaries(x_list, config, cache)
    rows = []
    for x in x_list:
        s = summ[x]
        for ell in ells:
            rows.append(_row(TableId.TABLE2, x, ell, truncated(s.stratum(ell).s_sum << ell, s.v_total, TABLE2_DIGITS)))
    return rows


# -- invariant suite ---------------------------------------------------------


def _check(rows: list, check_id: str, x: int, ok, detail: str) -> None:
    status = "skip" if ok is None else ("pass" if ok else "fail")
    rows.append(_row(TableId.CHECKS, check_id, x, status, detail))


def check_suite(x: int, config: RunConfig = DEFAULT, cache=None) -> list:
    """Run every invariant at scale x; failures are reported, never raised."""
    if x < 2:
        raise ValueError("check_suite needs x >= 2")
    rows: list = []
    depth = k0(x)
    # doubling grid: bases 2^j with 2^(j+n) <= x
    bases = [1 << j for j in range(2, depth + 1) if (1 << j) <= x]
    summ = summaries(sorted({x, *bases}), config, cache)
    s = summ[x]

    total = 1 + sum(st.v_count for st in s.strata)
    _check(rows, "partition", x, total == s.v_total, f"V={s.v_total} 1+sum V^l={total}")
    _check(rows, "s_exceeds_x", x, s.n_count > x, f"S={s.n_count}")
    s_from_strata = 2 + sum(st.s_sum for st in s.strata)
    _check(rows, "s_total", x, s_from_strata == s.n_count, f"2+sum S^l={s_from_strata} S={s.n_count}")

    hist_ok, bound_ok = True, True
    for st in s.strata:
        h = st.histogram
        hist_ok &= sum(h.values()) == st.v_count and sum(k * c for k, c in h.items()) == st.s_sum
        hist_ok &= (max(h) if h else 0) == st.max_mult and st.s_sum >= st.v_count
        cap = (x - (1 << st.ell)) // (1 << (st.ell + 1)) + 1 if x >= (1 << st.ell) else 0
        bound_ok &= st.v_count <= cap
    _check(rows, "histogram", x, hist_ok, f"strata 1..{depth}")
    _check(rows, "stratum_size", x, bound_ok, "V^l(x) <= floor((x-2^l)/2^(l+1))+1")

    fails = []
    for b in bases:
        for ell in range(1, 9):
            for n in range(1, 4):
                if (b << n) > x:
                    continue
                lhs = summ[b << n].stratum(ell + n).s_sum << n
                rhs = summ[b].stratum(ell).s_sum
                if lhs < rhs:
                    fails.append((b, ell, n))
    _check(rows, "doubling", x, not fails, f"violations={fails[:3]}" if fails else f"bases={len(bases)}")

    if preimage_bound(x) <= 10**6:
        direct = direct_stratum_sums(x)
        ok = all(direct.get(st.ell, 0) == st.s_sum for st in s.strata)
        _check(rows, "count_identity", x, ok, "direct sieve vs sweep")

    om = omega_counts(x, config)
    fails = []
    for ell in range(1, 7):
        rhs = sum(om[1 : ell + 2])
        if not s.stratum(ell).v_count < rhs:
            fails.append(ell)
    if x == 2:
        # V^1(2) = pi_1(2) = 1: the strict inequality first holds at x = 3
        _check(rows, "omega_bound", x, None, "V^1(2)=1 equals pi_1(2)+pi_2(2)=1")
    else:
        _check(rows, "omega_bound", x, not fails, f"V^l < sum pi_i, l=1..6; failing l={fails}")

    top = min(x // 2, 5 * 10**4)
    classes = [classify_2r(r, config) for r in range(3, top + 1, 2)]
    fails = [c.r for c in classes if c.multiplicity not in (0, 2, 4)]
    ex = classify_2r(1, config)
    _check(rows, "classify_2r", x, not fails and ex.pattern is Pattern.EXCEPTIONAL,
           f"odd r in [3,{top}]; failing={fails[:3]}")

    for t in (2, 3):
        members = r_t_members(x, t, config)
        qs = r_t_base_primes(x, t)
        cap = r_t_prime_bound(x, t, config)
        # pi((2x)^(1/t)) bounds the number of base primes q; the member count
        # itself can exceed it since one q contributes several exponents
        _check(rows, f"r_t_primes_t{t}", x, len(qs) <= cap, f"|R_t|={len(members)} primes={len(qs)} pi={cap}")
    quad = {2 * c.r for c in classes if c.pattern is Pattern.QUAD}
    ok = quad <= set(r_t_members(x, 2, config))
    if 2 * top + 2 > x:
        ok &= len(quad) == s.stratum(1).histogram.get(4, 0)
    _check(rows, "v1_4_in_r2", x, ok, f"|V^1_4({2 * top + 1})|={len(quad)}")

    small = min(x, 2000)
    table = phi_table_direct(preimage_bound(small))
    fails = []
    for m in range(1, small + 1):
        brute = tuple(int(n) for n in np.flatnonzero(table == m))
        if inverse_phi(m, config).elements != brute:
            fails.append(m)
    _check(rows, "invphi_oracle", x, not fails, f"m<={small}; failing={fails[:3]}")
    return rows


def all_pass(rows: Iterable[ReportRow]) -> bool:
    return all(r["status"] != "fail" for r in rows if r.table_id is TableId.CHECKS)


# -- rendering ---------------------------------------------------------------


def _render(v) -> str:
    return str(v)


def to_csv(rows: Sequence[ReportRow]) -> str:
    if not rows:
        return ""
    table_id = rows[0].table_id
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADERS[table_id])
    for r in rows:
        if r.table_id is not table_id:
            raise ValueError("mixed tables in one CSV")
        w.writerow([_render(v) for _, v in r.columns])
    return buf.getvalue()


def _parse(table_id: TableId, name: str, raw: str):
    if table_id is TableId.CHECKS and name != "x":
        return raw
    if name == "ratio":
        return Decimal(raw)
    return int(raw)


def from_csv(text: str, table_id: TableId) -> list:
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != HEADERS[table_id]:
        raise ValueError(f"unexpected header {header}")
    return [ReportRow(table_id, tuple((n, _parse(table_id, n, v)) for n, v in zip(header, line))) for line in reader]


def to_json(rows: Sequence[ReportRow]) -> str:
    out = []
    for r in rows:
        out.append({n: (str(v) if isinstance(v, Decimal) else v) for n, v in r.columns})
    return json.dumps(out, indent=1) + "\n"


def from_json(text: str, table_id: TableId) -> list:
    rows = []
    for obj in json.loads(text):
        cols = tuple((n, _parse(table_id, n, str(obj[n]))) for n in HEADERS[table_id])
        rows.append(ReportRow(table_id, cols))
    return rows


def render(rows: Sequence[ReportRow], fmt: str) -> str:
    return to_json(rows) if fmt == "json" else to_csv(rows)
