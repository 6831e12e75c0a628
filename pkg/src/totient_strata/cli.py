"""Command-line interface.

Exit status: 0 ok, 1 input error, 2 limit/resource error, 3 check failure.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import logging
import operator
import sys
from pathlib import Path

from . import dickson, invphi, reports, sieve, strata
from ._backend import NAME as BACKEND
from .cache import ResultCache
from .config import CACHE_ENV, RunConfig
from .errors import InvalidInput, LimitExceeded, TotientStrataError

log = logging.getLogger("totient_strata")

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Pow: operator.pow}


def parse_int(text: str) -> int:
    """Integers with + - * and powers, e.g. ``10^6+2``, ``5*10**7``, ``1e6``."""
    src = text.strip().replace("^", "**").replace("_", "")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            if isinstance(node.value, float):
                if not node.value.is_integer():
                    raise ValueError(text)
                return int(node.value)
            return node.value
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow) and b > 64:
                raise ValueError(text)
            return _OPS[type(node.op)](a, b)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise ValueError(text)

    try:
        return int(ev(ast.parse(src, mode="eval")))
    except (SyntaxError, ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not an integer expression: {text!r}") from exc


def parse_ells(values) -> list:
    """Accept ``2 3 4``, ``2-7`` or ``2,3,5``."""
    out = []
    for v in values:
        for part in str(v).split(","):
            if "-" in part.strip("-"):
                a, b = part.split("-", 1)
                out.extend(range(parse_int(a), parse_int(b) + 1))
            elif part:
                out.append(parse_int(part))
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    g.add_argument("--cache-dir", type=Path, default=None, help=f"result cache directory (env {CACHE_ENV})")
    g.add_argument("--no-cache", action="store_true")
    g.add_argument("--workers", type=int, default=None)
    g.add_argument("--segment-size", type=parse_int, default=None)
    g.add_argument("--sieve-limit", type=parse_int, default=None)
    g.add_argument("--memory-cap", type=parse_int, default=None, help="bytes")
    g.add_argument("--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="totient-strata", description="2-adic stratification of Euler totients")
    parser.add_argument("--backend", action="store_true", help="print the kernel backend and exit")
    sub = parser.add_subparsers(dest="cmd", parser_class=_Parser)

    p = sub.add_parser("sieve", parents=[common], help="phi (and omega) over [lo, hi)")
    p.add_argument("--lo", type=parse_int, default=1)
    p.add_argument("--hi", type=parse_int, required=True)
    p.add_argument("--omega", action="store_true")

    p = sub.add_parser("invphi", parents=[common], help="all n with phi(n) = M")
    p.add_argument("m", type=parse_int)
    p = sub.add_parser("mult", parents=[common], help="A(M) = |phi^-1(M)|")
    p.add_argument("m", type=parse_int)
    p = sub.add_parser("classify", parents=[common], help="shape of phi^-1(2R) for odd R")
    p.add_argument("r", type=parse_int)

    p = sub.add_parser("rt", parents=[common], help="totients <= X with a prime-power preimage q^j, j >= T")
    p.add_argument("--x", type=parse_int, required=True)
    p.add_argument("--t", type=parse_int, required=True)

    p = sub.add_parser("strata", parents=[common], help="per-stratum V, S, max multiplicity")
    p.add_argument("--x", type=parse_int, required=True)
    p.add_argument("--ell-max", type=parse_int, default=None)

    p = sub.add_parser("table1", parents=[common], help="totients 2 mod 4 by multiplicity")
    p.add_argument("--x", type=parse_int, nargs="+", required=True)
    for name, helptext in (("tablemax", "maximal multiplicity per stratum"), ("table2", "2^l S^l(x) / V(x)")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--x", type=parse_int, nargs="+", required=True)
        p.add_argument("--ell", nargs="+", required=True, help="e.g. 2-7 or 2 3 4")

    p = sub.add_parser("ell", parents=[common], help="strata l with 2^l S^l(x) > V(x)")
    p.add_argument("--x", type=parse_int, required=True)

    p = sub.add_parser("dickson", parents=[common], help="search the stratum-2 linear forms")
    p.add_argument("--k", type=parse_int, required=True)
    p.add_argument("--bound", type=parse_int, required=True)
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("lift", parents=[common], help="(p-1) m, multiplicity-preserving")
    p.add_argument("--m", type=parse_int, required=True)
    p.add_argument("--p", type=parse_int, required=True)

    p = sub.add_parser("check", parents=[common], help="run the invariant suite")
    p.add_argument("--x", type=parse_int, required=True)
    return parser


def _config(args) -> RunConfig:
    fields = {"output_format": args.format}
    for attr, name in (("workers", "workers"), ("segment_size", "segment_size"),
                       ("sieve_limit", "sieve_limit"), ("memory_cap", "memory_cap_bytes")):
        if getattr(args, attr) is not None:
            fields[name] = getattr(args, attr)
    if args.cache_dir is not None:
        fields["cache_dir"] = args.cache_dir
    try:
        cfg = RunConfig.from_env(**fields)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    return cfg.with_(cache_dir=None) if args.no_cache else cfg


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit_table(header, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    return _csv(header, rows)


def _dispatch(args, cfg: RunConfig, cache) -> tuple:
    """Returns (text, exit_status)."""
    fmt = cfg.output_format
    cmd = args.cmd
    if cmd == "sieve":
        seg = sieve.phi_range(args.lo, args.hi, cfg)
        header = ["n", "phi"]
        cols = [range(args.lo, args.hi), seg.values.tolist()]
        if args.omega:
            header.append("omega")
            cols.append(sieve.omega_range(args.lo, args.hi, cfg).values.tolist())
        return _emit_table(header, zip(*cols), fmt), 0
    if cmd == "invphi":
        pre = invphi.inverse_phi(args.m, cfg)
        if fmt == "json":
            return json.dumps({"m": pre.m, "multiplicity": pre.multiplicity, "elements": list(pre.elements)}) + "\n", 0
        return " ".join(map(str, pre.elements)) + "\n", 0
    if cmd == "mult":
        k = invphi.multiplicity(args.m, cfg)
        return (json.dumps({"m": args.m, "multiplicity": k}) if fmt == "json" else str(k)) + "\n", 0
    if cmd == "classify":
        c = invphi.classify_2r(args.r, cfg)
        header = ["r", "multiplicity", "pattern", "prime", "exponent"]
        row = [c.r, c.multiplicity, c.pattern.value, c.prime if c.prime else "", c.exponent if c.exponent else ""]
        if fmt == "json":
            return json.dumps(dict(zip(header, [c.r, c.multiplicity, c.pattern.value, c.prime, c.exponent]))) + "\n", 0
        return _csv(header, [row]), 0
    if cmd == "rt":
        members = invphi.r_t_members(args.x, args.t, cfg)
        if fmt == "json":
            body = {
                "x": args.x, "t": args.t, "count": len(members), "members": list(members),
                "base_primes": len(invphi.r_t_base_primes(args.x, args.t)),
                "prime_bound": invphi.r_t_prime_bound(args.x, args.t, cfg),
            }
            return json.dumps(body) + "\n", 0
        return " ".join(map(str, members)) + "\n", 0
    if cmd == "strata":
        depth = strata.k0(args.x) if args.x >= 2 else 0
        ell_max = depth if args.ell_max is None else args.ell_max
        stats, v_total = strata.stratum_stats(args.x, ell_max, cfg, cache)
        if fmt == "json":
            body = {"x": args.x, "v_total": v_total, "strata": [s.to_dict() for s in stats]}
            return json.dumps(body, sort_keys=True) + "\n", 0
        header = ["x", "ell", "v_count", "s_sum", "max_mult", "v_total"]
        return _csv(header, [[s.x, s.ell, s.v_count, s.s_sum, s.max_mult, v_total] for s in stats]), 0
    if cmd == "table1":
        return reports.render(reports.table1(args.x, cfg, cache), fmt), 0
    if cmd == "tablemax":
        return reports.render(reports.table_max(args.x, parse_ells(args.ell), cfg, cache), fmt), 0
    if cmd == "table2":
        return reports.render(reports.table_ratio(args.x, parse_ells(args.ell), cfg, cache), fmt), 0
    if cmd == "ell":
        e = strata.ell_of_x(args.x, cfg, cache)
        body = {"x": e.x, "candidates": list(e.candidates), "ell": e.ell}
        if fmt == "json":
            return json.dumps(body) + "\n", 0
        return _csv(["x", "ell", "candidates"], [[e.x, "" if e.ell is None else e.ell, " ".join(map(str, e.candidates))]]), 0
    if cmd == "dickson":
        w = dickson.search_tuple(args.k, args.bound)
        if w is None:
            return json.dumps({"k": args.k, "bound": args.bound, "found": False}) + "\n", 0
        ver = dickson.construct_totient(w, cfg) if args.verify else None
        return dickson.witness_json(w, ver), 0
    if cmd == "lift":
        lifted = strata.lift_totient(args.m, args.p, cfg)
        header = ["m", "p", "lifted", "mult_m", "mult_lifted"]
        row = [args.m, args.p, lifted, invphi.multiplicity(args.m, cfg), invphi.multiplicity(lifted, cfg)]
        return _emit_table(header, [row], fmt), 0
    if cmd == "check":
        rows = reports.check_suite(args.x, cfg, cache)
        return reports.render(rows, fmt), (0 if reports.all_pass(rows) else 3)
    raise InvalidInput(f"unknown subcommand {cmd!r}")


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.backend:
            stdout.write(BACKEND + "\n")
            return 0
        if args.cmd is None:
            raise InvalidInput("a subcommand is required")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        cfg = _config(args)
        cache = ResultCache(cfg.cache_dir) if cfg.cache_dir else None
        text, status = _dispatch(args, cfg, cache)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (LimitExceeded, MemoryError) as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return 2
    except TotientStrataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
