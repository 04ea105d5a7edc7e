#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot paths (tail sums under plan search, double-plan design,
sequential boundary DP) on both backends and prints the speedups:

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import math
import time

from lotqc._kernels import _pure

try:
    from lotqc._kernels import _native
except ImportError:
    _native = None


def time_call(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_tails(mod):
    def run():
        total = 0.0
        for n in range(100, 3400, 40):
            for k in range(0, 14):
                total += mod.hyper_cdf(3380, 101, n, k)
                total += mod.hyper_sf(3380, 101, n, k)
        return total

    return run


def bench_double_design(mod):
    # the inner workload of a double-plan search at N=1000
    def run():
        total = 0.0
        for c2 in range(1, 13):
            for c1 in range(0, c2):
                for n in (64, 128, 256, 299, 312):
                    total += mod.double_accept_hyper(1000, 30, n, n, c1, c2, False)
        return total

    return run


def bench_sequential_dp(mod):
    log_a = math.log(0.95 / 0.01)
    log_b = math.log(0.05 / 0.99)

    def run():
        a, r = mod.hyper_llr_boundaries(24799, 248, 744, log_a, log_b, 682)
        total = 0.0
        for d in (100, 300, 499, 900):
            oc, asn = mod.sequential_dp_hyper(24799, d, a, r, 682, 13)
            total += asn
        return total

    return run


BENCHES = [
    ("hypergeometric tail sums", bench_tails),
    ("double-plan composite OC", bench_double_design),
    ("sequential boundary DP", bench_sequential_dp),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _native is None:
        print("compiled extension not built; only the pure backend is available")
    print(f"{'benchmark':<28} {'pure':>10} {'native':>10} {'speedup':>9}")
    for name, make in BENCHES:
        t_pure = time_call(make(_pure), args.repeat)
        if _native is not None:
            t_nat = time_call(make(_native), args.repeat)
            print(f"{name:<28} {t_pure*1e3:>8.1f}ms {t_nat*1e3:>8.1f}ms {t_pure/t_nat:>8.1f}x")
        else:
            print(f"{name:<28} {t_pure*1e3:>8.1f}ms {'-':>10} {'-':>9}")


if __name__ == "__main__":
    main()
