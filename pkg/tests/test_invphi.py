import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from totient_strata import InvalidInput, LimitExceeded, RunConfig
from totient_strata.invphi import (
    Pattern,
    classify_2r,
    divisors,
    factorize,
    inverse_phi,
    multiplicity,
    preimage_bound,
    prime_power,
    r_t_base_primes,
    r_t_members,
    r_t_prime_bound,
)
from totient_strata.sieve import phi_range

from . import oracles


@pytest.fixture(scope="module")
def phi_table():
    # brute-force table well past preimage_bound(10^4)
    n = 6 * 10**4
    return np.array(oracles.phi_list(n), dtype=np.int64)


def test_examples():
    assert inverse_phi(1).elements == (1, 2)
    assert inverse_phi(3).elements == ()
    assert inverse_phi(4).elements == (5, 8, 10, 12)
    assert inverse_phi(24).elements == (35, 39, 45, 52, 56, 70, 72, 78, 84, 90)
    assert multiplicity(1) == 2
    assert multiplicity(2) == 3
    assert multiplicity(6) == 4
    assert inverse_phi(6).elements == (7, 9, 14, 18)


def test_preimage_set_protocol():
    s = inverse_phi(4)
    assert 8 in s and 9 not in s
    assert len(s) == s.multiplicity == 4
    assert list(s) == [5, 8, 10, 12]


def test_oracle_small(phi_table):
    for m in range(1, 501):
        brute = tuple(int(n) for n in np.flatnonzero(phi_table == m))
        assert inverse_phi(m).elements == brute, m


def test_oracle_to_ten_thousand(phi_table):
    # preimage_bound(10^4) < 6 * 10^4, so the table is complete
    assert preimage_bound(10**4) < len(phi_table)
    order = np.argsort(phi_table[1:], kind="stable") + 1
    vals = phi_table[order]
    cuts = np.searchsorted(vals, np.arange(1, 10**4 + 2))
    for m in range(1, 10**4 + 1):
        brute = tuple(sorted(int(n) for n in order[cuts[m - 1] : cuts[m]]))
        assert inverse_phi(m).elements == brute, m


def test_parity_closure():
    for m in range(2, 5001, 2):
        s = inverse_phi(m)
        for n in s:
            if n % 2 and n > 1:
                assert 2 * n in s


def test_odd_values_are_nontotients():
    assert all(multiplicity(m) == 0 for m in range(3, 2001, 2))


def test_preimages_have_right_totient():
    seg = phi_range(1, 60001)
    for m in (2, 8, 48, 120, 720, 2310 * 2, 9240):
        for n in inverse_phi(m):
            assert seg[n] == m


def test_large_totient():
    m = 4 * 15**4 * 39 * 63  # Dickson k = 3 totient
    s = inverse_phi(m)
    assert s.multiplicity >= 3
    for n in s.elements[:50]:
        assert oracles.phi(n) == m


def test_inverse_phi_errors():
    with pytest.raises(InvalidInput):
        inverse_phi(0)
    with pytest.raises(LimitExceeded):
        inverse_phi(2**61)
    with pytest.raises(LimitExceeded):
        inverse_phi(10**6, RunConfig(invphi_limit=1000))


@given(st.integers(min_value=2, max_value=10**18))
def test_factorize(n):
    fac = factorize(n)
    prod = 1
    for p, e in fac.items():
        assert oracles.is_prime(p) if p < 10**6 else True
        prod *= p**e
    assert prod == n


def test_factorize_hard():
    a, b = 1000000007, 998244353
    assert factorize(a * b) == {b: 1, a: 1}
    assert factorize((2**31 - 1) ** 2) == {2**31 - 1: 2}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(11) == (11, 1)
    assert prime_power(12) is None
    assert prime_power(1) is None
    assert prime_power(2**40) == (2, 40)


def test_classify_examples():
    c = classify_2r(5)
    assert (c.pattern, c.prime, c.exponent, c.multiplicity) == (Pattern.PAIR, 11, 1, 2)
    c = classify_2r(3)
    assert (c.pattern, c.prime, c.exponent, c.multiplicity) == (Pattern.QUAD, 3, 2, 4)
    assert classify_2r(7).pattern is Pattern.EMPTY
    c = classify_2r(1)
    assert c.pattern is Pattern.EXCEPTIONAL and c.multiplicity == 3


def test_classify_errors():
    for r in (0, 2, -3):
        with pytest.raises(InvalidInput):
            classify_2r(r)


def test_classify_2r_range():
    counts = {0: 0, 2: 0, 4: 0}
    for r in range(3, 5 * 10**4 + 1, 2):
        c = classify_2r(r)
        assert c.multiplicity in (0, 2, 4)
        counts[c.multiplicity] += 1
        if c.pattern is Pattern.PAIR:
            assert c.prime ** (c.exponent - 1) * (c.prime - 1) == 2 * r
        elif c.pattern is Pattern.QUAD:
            assert oracles.is_prime(2 * r + 1)
            assert c.prime ** (c.exponent - 1) * (c.prime - 1) == 2 * r
    assert all(counts.values())


def test_preimage_bound_examples():
    assert preimage_bound(1) >= 2
    assert preimage_bound(10) >= 30


def test_preimage_bound_exhaustive():
    x = 10**4
    bound = preimage_bound(x)
    table = np.array(oracles.phi_sieve(100 * x), dtype=np.int64)
    hits = np.flatnonzero((table <= x) & (np.arange(len(table)) > 0))
    assert hits.max() <= bound


def test_preimage_bound_covers_small_x():
    table = np.array(oracles.phi_list(20000), dtype=np.int64)
    for x in range(1, 2001):
        hits = np.flatnonzero((table[1:] <= x)) + 1
        assert hits.max() <= preimage_bound(x)


@given(st.integers(min_value=1, max_value=10**15), st.integers(min_value=0, max_value=10**6))
def test_preimage_bound_monotone(x, d):
    assert preimage_bound(x) <= preimage_bound(x + d)


def test_preimage_bound_errors():
    with pytest.raises(InvalidInput):
        preimage_bound(0)
    with pytest.raises(LimitExceeded):
        preimage_bound(2**62)


def test_r_t_examples():
    assert r_t_members(10, 2) == (2, 4, 6, 8)
    assert r_t_members(1, 2) == ()
    with pytest.raises(InvalidInput):
        r_t_members(10, 1)


def test_r_t_brute():
    x = 3000
    for t in (2, 3, 4):
        brute = set()
        for q in range(2, 2 * x):
            if not oracles.is_prime(q):
                continue
            j = t
            while q ** (j - 1) * (q - 1) <= x:
                brute.add(q ** (j - 1) * (q - 1))
                j += 1
        assert set(r_t_members(x, t)) == brute


@pytest.mark.parametrize("x", [10**3, 10**4, 10**5])
@pytest.mark.parametrize("t", [2, 3])
def test_r_t_prime_count_bound(x, t):
    assert len(r_t_base_primes(x, t)) <= r_t_prime_bound(x, t)


def test_r_t_prime_bound_value():
    # floor(sqrt(2 * 10^4)) = 141
    assert r_t_prime_bound(10**4, 2) == sum(oracles.is_prime(q) for q in range(142))


def test_quad_totients_in_r2():
    r2 = set(r_t_members(10**5, 2))
    for r in range(3, 5 * 10**4 + 1, 2):
        if multiplicity(2 * r) == 4:
            assert 2 * r in r2
