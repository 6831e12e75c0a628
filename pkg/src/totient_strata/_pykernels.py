"""Numpy implementations of the sieve kernels.

Same signatures and outputs as the compiled ``_kernels`` module. Used when
the extension is not built, or when ``TOTIENT_STRATA_PURE=1`` is set.
"""

import numpy as np


def spf_sieve(n):
    # Eratosthenes on smallest prime factors; the compiled twin is linear.
    n = max(int(n), 0)
    spf = np.zeros(n + 1, dtype=np.uint32)
    if n >= 2:
        spf[2:] = np.arange(2, n + 1, dtype=np.uint32)
        for p in range(2, int(n**0.5) + 1):
            if spf[p] != p:
                continue
            block = spf[p * p :: p]
            block[block > p] = p
    primes = np.flatnonzero(spf == np.arange(n + 1, dtype=np.uint32)).astype(np.uint32)
    primes = primes[primes >= 2]
    return spf, primes


def prime_flags(lo, hi, base_primes):
    lo, hi = int(lo), int(hi)
    flags = np.ones(hi - lo, dtype=np.uint8)
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo :: p] = 0
    flags[: max(0, min(2, hi) - lo)] = 0
    return flags


def _strip_prime(rem, lo, hi, p):
    pk = p
    while pk < hi:
        s = (-lo) % pk
        rem[s::pk] //= p
        pk *= p


def phi_segment(lo, hi, base_primes):
    lo, hi = int(lo), int(hi)
    phi = np.arange(lo, hi, dtype=np.uint64)
    rem = phi.copy()
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        s = (-lo) % p
        view = phi[s::p]
        view -= view // np.uint64(p)
        _strip_prime(rem, lo, hi, p)
    big = rem > 1
    phi[big] -= phi[big] // rem[big]
    return phi


def omega_segment(lo, hi, base_primes):
    lo, hi = int(lo), int(hi)
    om = np.zeros(hi - lo, dtype=np.uint8)
    rem = np.arange(lo, hi, dtype=np.uint64)
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        s = (-lo) % p
        om[s::p] += 1
        _strip_prime(rem, lo, hi, p)
    om[rem > 1] += 1
    return om


def accumulate(values, counts, mlo, mhi):
    mlo, mhi = int(mlo), int(mhi)
    sel = values[(values >= mlo) & (values < mhi)]
    if sel.size == 0:
        return
    sel = (sel - np.uint64(mlo)).astype(np.intp)
    if 8 * sel.size >= mhi - mlo:
        binned = np.bincount(sel, minlength=mhi - mlo)
        counts += binned.astype(counts.dtype)
    else:
        np.add.at(counts, sel, 1)
