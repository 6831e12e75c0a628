"""Inverse totient: complete preimage sets of phi, the classification of
totients 2 mod 4, and totients with a high prime-power preimage."""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .config import DEFAULT, RunConfig
from .errors import InvalidInput, LimitExceeded
from .sieve import U63, base_primes, iroot, is_prime, prime_pi

EULER_GAMMA = 0.5772156649015329
SAFETY = 1.05


@dataclass(frozen=True)
class PreimageSet:
    m: int
    elements: tuple

    @property
    def multiplicity(self) -> int:
        return len(self.elements)

    def __contains__(self, n) -> bool:
        return n in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


class Pattern(str, Enum):
    EMPTY = "EMPTY"
    PAIR = "PAIR"
    QUAD = "QUAD"
    EXCEPTIONAL = "EXCEPTIONAL"


@dataclass(frozen=True)
class LemmaBClass:
    """Shape of phi^{-1}(2r) for odd r.

    PAIR: {p^e, 2p^e} with ``prime=p, exponent=e``.
    QUAD: {2r+1, q^e, 4r+2, 2q^e} with ``prime=q, exponent=e`` (e > 1).
    """

    r: int
    multiplicity: int
    pattern: Pattern
    prime: Optional[int] = None
    exponent: Optional[int] = None


def _phi_lower_ratio(n: float) -> float:
    # n/phi(n) < e^gamma loglog n + 3/loglog n for n >= 3.
    # Rosser and Schoenfeld, "Approximate formulas for some functions of prime
    # numbers", Illinois J. Math. 6 (1962), Theorem 15, state it with 2.50637
    # in place of 3 and the single exception n = 223092870; the constant 3
    # absorbs the exception.
    ll = math.log(math.log(n))
    return math.exp(EULER_GAMMA) * ll + 3.0 / ll


def preimage_bound(x: int) -> int:
    """An N with phi(n) <= x  =>  n <= N.

    For n >= 17 the ratio n / h(n), h the bound above, is increasing, so
    phi(n) <= x forces n < N* where N* = x h(N*). N* is found by upward
    fixed-point iteration from 17, then padded by 5%.
    """
    if x < 1:
        raise InvalidInput("preimage_bound needs x >= 1")
    x = float(x)
    n = 17.0
    if n / _phi_lower_ratio(n) >= x:
        return 16
    for _ in range(200):
        nxt = x * _phi_lower_ratio(n)
        if nxt <= n:
            break
        n = nxt
    bound = max(16, math.ceil(SAFETY * n))
    if bound > U63:
        raise LimitExceeded(f"preimage bound {bound} exceeds 2^63")
    return bound


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict:
    """Prime factorization {p: e}; trial division then Pollard-Brent."""
    out: dict = {}
    for p in base_primes(1000):
        p = int(p)
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        f = stack.pop()
        if is_prime(f):
            out[f] = out.get(f, 0) + 1
            continue
        r = iroot(f, 2)
        if r * r == f:
            stack += [r, r]
            continue
        d = _pollard_brent(f)
        stack += [d, f // d]
    return dict(sorted(out.items()))


def divisors(n: int) -> list:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _solve(m: int) -> list:
    # primes p with (p - 1) | m, ascending; each factor p^k of a preimage
    # contributes p^(k-1)(p-1) and factors are chosen largest prime first.
    cand = [d + 1 for d in divisors(m) if is_prime(d + 1)]
    memo: dict = {}

    def rec(rem: int, j: int) -> list:
        key = (rem, j)
        if key in memo:
            return memo[key]
        out = [1] if rem == 1 else []
        if rem == 1 or rem % 2 == 0:
            for i in range(min(j, bisect_right(cand, rem + 1)) - 1, -1, -1):
                p = cand[i]
                if rem % (p - 1):
                    continue
                r, pk = rem // (p - 1), p
                while True:
                    out.extend(t * pk for t in rec(r, i))
                    if r % p:
                        break
                    r //= p
                    pk *= p
        memo[key] = out
        return out

    return rec(m, len(cand))


def inverse_phi(m: int, config: RunConfig = DEFAULT) -> PreimageSet:
    """All n with phi(n) = m, sorted. Nontotients give an empty set."""
    if m < 1:
        raise InvalidInput("inverse_phi needs m >= 1")
    if m > config.invphi_limit:
        raise LimitExceeded(f"m={m} exceeds inverse_phi limit {config.invphi_limit}")
    if m > 1 and m % 2:
        return PreimageSet(m, ())
    return PreimageSet(m, tuple(sorted(_solve(m))))


def multiplicity(m: int, config: RunConfig = DEFAULT) -> int:
    return inverse_phi(m, config).multiplicity


def prime_power(n: int) -> Optional[tuple]:
    """(p, e) if n = p^e with p prime, else None."""
    if n < 2:
        return None
    for e in range(n.bit_length(), 0, -1):
        p = iroot(n, e)
        if p >= 2 and p**e == n and is_prime(p):
            return p, e
    return None


def classify_2r(r: int, config: RunConfig = DEFAULT) -> LemmaBClass:
    if r < 1 or r % 2 == 0:
        raise InvalidInput(f"classify_2r needs odd r >= 1, got {r}")
    pre = inverse_phi(2 * r, config)
    k = pre.multiplicity
    if r == 1:
        return LemmaBClass(r, k, Pattern.EXCEPTIONAL)
    if k == 0:
        return LemmaBClass(r, 0, Pattern.EMPTY)
    odd = [e for e in pre.elements if e % 2]
    if k == 2 and len(odd) == 1 and set(pre.elements) == {odd[0], 2 * odd[0]}:
        pp = prime_power(odd[0])
        if pp and pp[0] > 2:
            return LemmaBClass(r, 2, Pattern.PAIR, *pp)
    if k == 4 and is_prime(2 * r + 1):
        rest = [e for e in odd if e != 2 * r + 1]
        if len(rest) == 1 and set(pre.elements) == {2 * r + 1, rest[0], 4 * r + 2, 2 * rest[0]}:
            pp = prime_power(rest[0])
            if pp and pp[1] > 1:
                return LemmaBClass(r, 4, Pattern.QUAD, *pp)
    raise AssertionError(f"phi^-1({2 * r}) = {pre.elements} has no recognised shape")


def r_t_members(x: int, t: int, config: RunConfig = DEFAULT) -> tuple:
    """Sorted totients k <= x with a preimage q^j, q prime, j >= t."""
    if t < 2:
        raise InvalidInput("t must be >= 2")
    if x > config.sieve_limit:
        raise LimitExceeded(f"x={x} exceeds sieve limit")
    found = set()
    # q^(t-1)(q-1) <= x forces q <= (2x)^(1/t)
    for q in base_primes(iroot(2 * max(x, 0), t)):
        q = int(q)
        k = q ** (t - 1) * (q - 1)
        while k <= x:
            found.add(k)
            k *= q
    return tuple(sorted(found))


def r_t_prime_bound(x: int, t: int, config: RunConfig = DEFAULT) -> int:
    """pi(floor((2x)^(1/t))): the number of primes q that can occur in R_t(x)."""
    return prime_pi(iroot(2 * x, t), config)


def r_t_base_primes(x: int, t: int) -> tuple:
    """Distinct primes q with some q^j (j >= t) having phi(q^j) <= x."""
    return tuple(
        int(q) for q in base_primes(iroot(2 * max(x, 0), t)) if int(q) ** (t - 1) * (int(q) - 1) <= x
    )
