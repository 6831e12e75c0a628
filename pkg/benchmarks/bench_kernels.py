"""Compare the compiled and numpy kernels on the sweep's hot loops.

    python benchmarks/bench_kernels.py [--n 4000000] [--repeat 3]
"""

import argparse
import math
import time

import numpy as np

from totient_strata import _backend


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4_000_000, help="segment length")
    ap.add_argument("--lo", type=int, default=10**9, help="segment start (high segments take the slow path)")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    impls = _backend.IMPLEMENTATIONS
    if len(impls) < 2:
        print("compiled extension not built; only", list(impls))
    lo, hi = args.lo, args.lo + args.n
    ref = impls["numpy"]
    primes = ref.spf_sieve(math.isqrt(hi) + 1)[1]
    counts_len = 1 << 22
    vals = ref.phi_segment(1, args.n + 1, primes) % counts_len

    cases = {
        "spf_sieve": lambda k: k.spf_sieve(args.n),
        "phi_segment(low)": lambda k: k.phi_segment(1, args.n + 1, primes),
        "phi_segment(high)": lambda k: k.phi_segment(lo, hi, primes),
        "omega_segment": lambda k: k.omega_segment(lo, hi, primes),
        "prime_flags": lambda k: k.prime_flags(lo, hi, primes),
        "accumulate": lambda k: k.accumulate(vals, np.zeros(counts_len, dtype=np.uint32), 0, counts_len),
    }
    names = sorted(impls)
    print(f"{'kernel':<20}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for label, fn in cases.items():
        t = {n: best_of(lambda: fn(impls[n]), args.repeat) for n in names}
        speed = f"{t['numpy'] / t['cython']:>9.1f}x" if "cython" in t else ""
        print(f"{label:<20}" + "".join(f"{t[n]:>11.3f}s" for n in names) + speed)


if __name__ == "__main__":
    main()
