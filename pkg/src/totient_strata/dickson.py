"""High-multiplicity totients in stratum 2 from the linear forms

    f_i(n) = 1 + 2 * 3^i * 5^(k+1-i) * (2n + 1)
    g_i(m) = 1 + 2 * 3^(k+1-i) * 5^i * (2m + 1),   i = 1..k.

If every f_i(n) and g_i(m) is prime then (f_i(n) - 1)(g_i(m) - 1) equals
4 * 15^(k+1) * (2n+1)(2m+1) for all i, so each product f_i(n) g_i(m) is a
preimage of that one totient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .config import DEFAULT, RunConfig
from .errors import InvalidInput, LimitExceeded
from .invphi import inverse_phi
from .sieve import U63, base_primes, is_prime, v2

_SMALL = tuple(int(p) for p in base_primes(97))
JSON_SAFE = 1 << 53


@dataclass(frozen=True)
class DicksonWitness:
    k: int
    n: int
    m: int
    p: tuple
    q: tuple
    totient: int

    @property
    def products(self) -> tuple:
        return tuple(a * b for a, b in zip(self.p, self.q))

    def check(self) -> None:
        """Raise AssertionError unless every witness invariant holds."""
        assert len(self.p) == len(self.q) == self.k
        assert all(is_prime(a) for a in self.p + self.q), "non-prime form value"
        f, g = forms(self.k)
        assert self.p == tuple(1 + c * (2 * self.n + 1) for c in f)
        assert self.q == tuple(1 + c * (2 * self.m + 1) for c in g)
        assert all((a - 1) * (b - 1) == self.totient for a, b in zip(self.p, self.q))
        assert self.totient == 4 * 15 ** (self.k + 1) * (2 * self.n + 1) * (2 * self.m + 1)
        assert v2(self.totient) == 2
        assert all(a != b for a, b in zip(self.p, self.q)), "p_i == q_i: product is a square"
        assert len(set(self.products)) == self.k, "products collide"

    def to_dict(self) -> dict:
        def enc(v: int):
            return str(v) if v > JSON_SAFE else v

        return {
            "k": self.k,
            "n": enc(self.n),
            "m": enc(self.m),
            "p": [enc(v) for v in self.p],
            "q": [enc(v) for v in self.q],
            "totient": enc(self.totient),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DicksonWitness":
        return cls(
            int(d["k"]), int(d["n"]), int(d["m"]),
            tuple(int(v) for v in d["p"]), tuple(int(v) for v in d["q"]), int(d["totient"]),
        )


def forms(k: int) -> tuple:
    """Coefficients (f, g): the i-th form is 1 + coeff * (2t + 1)."""
    if k < 1:
        raise InvalidInput("k must be >= 1")
    f = [2 * 3**i * 5 ** (k + 1 - i) for i in range(1, k + 1)]
    g = [2 * 3 ** (k + 1 - i) * 5**i for i in range(1, k + 1)]
    if 4 * 15 ** (k + 1) >= U63:
        raise LimitExceeded(f"k={k}: totients overflow 64 bits")
    return f, g


def admissible_check(coeffs: Sequence[int]) -> bool:
    """True iff for each prime p <= len(coeffs) + 1 some residue t mod p keeps
    every form 1 + c (2t + 1) nonzero mod p."""
    if not coeffs:
        raise InvalidInput("need at least one form")
    for p in base_primes(len(coeffs) + 1):
        p = int(p)
        covered = {t for t in range(p) for c in coeffs if (1 + c * (2 * t + 1)) % p == 0}
        if len(covered) == p:
            return False
    return True


def _all_prime(coeffs: Sequence[int], t: int) -> Optional[tuple]:
    vals = tuple(1 + c * (2 * t + 1) for c in coeffs)
    for v in vals:
        for sp in _SMALL:
            if v % sp == 0 and v != sp:
                return None
    if all(is_prime(v) for v in vals):
        return vals
    return None


def search_tuple(k: int, bound: int) -> Optional[DicksonWitness]:
    """Least n <= bound with all f_i(n) prime, then least m <= bound with all
    g_i(m) prime, p_i != q_i, and the k products pairwise distinct.
    None if not found."""
    f, g = forms(k)
    if bound < 0:
        return None
    n = next((t for t in range(bound + 1) if _all_prime(f, t)), None)
    if n is None:
        return None
    p = _all_prime(f, n)
    for m in range(bound + 1):
        q = _all_prime(g, m)
        if q is None:
            continue
        # m == n gives q_i = p_(k+1-i): the products pair up, and for odd k
        # the middle one is a square, which phi does not send to the totient
        if any(a == b for a, b in zip(p, q)) or len({a * b for a, b in zip(p, q)}) < k:
            continue
        totient = (p[0] - 1) * (q[0] - 1)
        if totient >= U63:
            raise LimitExceeded("witness totient overflows 64 bits")
        w = DicksonWitness(k, n, m, p, q, totient)
        w.check()
        return w
    return None


@dataclass(frozen=True)
class Verification:
    totient: int
    multiplicity: Optional[int]  # None when the totient is beyond inverse_phi's limit

    @property
    def verified(self) -> bool:
        return self.multiplicity is not None


def construct_totient(w: DicksonWitness, config: RunConfig = DEFAULT) -> Verification:
    """Common totient of the witness, confirmed through inverse_phi when in range."""
    w.check()
    if w.totient > config.invphi_limit:
        return Verification(w.totient, None)
    pre = inverse_phi(w.totient, config)
    missing = [x for x in w.products if x not in pre]
    if missing:
        raise AssertionError(f"products {missing} not in phi^-1({w.totient})")
    assert pre.multiplicity >= w.k
    return Verification(w.totient, pre.multiplicity)


def witness_json(w: DicksonWitness, verification: Optional[Verification] = None) -> str:
    body = w.to_dict()
    if verification is not None:
        body["verified_multiplicity"] = verification.multiplicity
    return json.dumps(body) + "\n"
