# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sieve kernels.

Every function here has a numpy twin in ``_pykernels`` with an identical
signature and identical output; ``_backend`` picks one at import time.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, uint32_t, uint64_t

cnp.import_array()


def spf_sieve(Py_ssize_t n):
    """Linear sieve. Returns ``(spf, primes)`` with ``spf[k]`` the smallest
    prime factor of ``k`` for ``2 <= k <= n`` (``spf[0] = spf[1] = 0``)."""
    if n < 0:
        n = 0
    spf_arr = np.zeros(n + 1, dtype=np.uint32)
    primes_arr = np.empty(n // 2 + 2, dtype=np.uint32)
    cdef uint32_t[::1] spf = spf_arr
    cdef uint32_t[::1] primes = primes_arr
    cdef Py_ssize_t count = 0, i, j
    cdef uint64_t p, ip
    with nogil:
        for i in range(2, n + 1):
            if spf[i] == 0:
                spf[i] = <uint32_t>i
                primes[count] = <uint32_t>i
                count += 1
            j = 0
            while j < count:
                p = primes[j]
                ip = <uint64_t>i * p
                if p > spf[i] or ip > <uint64_t>n:
                    break
                spf[ip] = <uint32_t>p
                j += 1
    return spf_arr, primes_arr[:count].copy()


def prime_flags(uint64_t lo, uint64_t hi, const uint32_t[::1] base_primes):
    """``flags[i] = 1`` iff ``lo + i`` is prime, for ``lo + i`` in ``[lo, hi)``."""
    cdef Py_ssize_t size = <Py_ssize_t>(hi - lo)
    out = np.ones(size, dtype=np.uint8)
    cdef uint8_t[::1] flags = out
    cdef Py_ssize_t k, nb = base_primes.shape[0]
    cdef uint64_t p, start, j
    with nogil:
        k = 0
        while k < nb:
            p = base_primes[k]
            if p * p >= hi:
                break
            start = p * p
            if start < lo:
                start = ((lo + p - 1) // p) * p
            j = start
            while j < hi:
                flags[j - lo] = 0
                j += p
            k += 1
        j = lo
        while j < hi and j < 2:
            flags[j - lo] = 0
            j += 1
    return out


cdef void _phi32(uint32_t lo, uint32_t hi, const uint32_t[::1] base_primes,
                 uint64_t[::1] phi, uint32_t[::1] rem) noexcept nogil:
    cdef Py_ssize_t size = hi - lo, i, k, nb = base_primes.shape[0]
    cdef uint32_t p, r, start, j, f
    for i in range(size):
        f = lo + <uint32_t>i
        rem[i] = f
        phi[i] = f
    k = 0
    while k < nb:
        p = base_primes[k]
        if <uint64_t>p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        j = start - lo
        while j < size:
            f = <uint32_t>phi[j]
            phi[j] = f - f // p
            r = rem[j] // p
            while r % p == 0:
                r = r // p
            rem[j] = r
            j += p
        k += 1
    for i in range(size):
        r = rem[i]
        if r > 1:
            f = <uint32_t>phi[i]
            phi[i] = f - f // r


cdef void _phi64(uint64_t lo, uint64_t hi, const uint32_t[::1] base_primes,
                 uint64_t[::1] phi, uint64_t[::1] rem) noexcept nogil:
    cdef Py_ssize_t size = <Py_ssize_t>(hi - lo), i, k, nb = base_primes.shape[0]
    cdef uint64_t p, r, start, j
    for i in range(size):
        rem[i] = lo + i
        phi[i] = lo + i
    k = 0
    while k < nb:
        p = base_primes[k]
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        j = start - lo
        while j < <uint64_t>size:
            phi[j] -= phi[j] // p
            r = rem[j] // p
            while r % p == 0:
                r = r // p
            rem[j] = r
            j += p
        k += 1
    for i in range(size):
        r = rem[i]
        if r > 1:
            phi[i] -= phi[i] // r


def phi_segment(uint64_t lo, uint64_t hi, const uint32_t[::1] base_primes):
    """Euler phi of every integer in ``[lo, hi)``; needs all primes below sqrt(hi)."""
    cdef Py_ssize_t size = <Py_ssize_t>(hi - lo)
    out = np.empty(size, dtype=np.uint64)
    cdef uint64_t[::1] phi = out
    cdef uint32_t[::1] rem32
    cdef uint64_t[::1] rem64
    if hi <= 0xFFFFFFFF:
        rem32 = np.empty(size, dtype=np.uint32)
        with nogil:
            _phi32(<uint32_t>lo, <uint32_t>hi, base_primes, phi, rem32)
    else:
        rem64 = np.empty(size, dtype=np.uint64)
        with nogil:
            _phi64(lo, hi, base_primes, phi, rem64)
    return out


def omega_segment(uint64_t lo, uint64_t hi, const uint32_t[::1] base_primes):
    """Number of distinct prime factors of every integer in ``[lo, hi)``."""
    cdef Py_ssize_t size = <Py_ssize_t>(hi - lo), i, k, nb = base_primes.shape[0]
    out = np.zeros(size, dtype=np.uint8)
    rem_arr = np.arange(lo, hi, dtype=np.uint64)
    cdef uint8_t[::1] om = out
    cdef uint64_t[::1] rem = rem_arr
    cdef uint64_t p, r, start, j
    with nogil:
        k = 0
        while k < nb:
            p = base_primes[k]
            if p * p >= hi:
                break
            start = ((lo + p - 1) // p) * p
            j = start - lo
            while j < <uint64_t>size:
                om[j] += 1
                r = rem[j] // p
                while r % p == 0:
                    r = r // p
                rem[j] = r
                j += p
            k += 1
        for i in range(size):
            if rem[i] > 1:
                om[i] += 1
    return out


def accumulate(const uint64_t[::1] values, uint32_t[::1] counts, uint64_t mlo, uint64_t mhi):
    """``counts[v - mlo] += 1`` for each ``v`` in ``values`` with ``mlo <= v < mhi``."""
    cdef Py_ssize_t i, n = values.shape[0]
    cdef uint64_t v
    with nogil:
        for i in range(n):
            v = values[i]
            if v >= mlo and v < mhi:
                counts[v - mlo] += 1
