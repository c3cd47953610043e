#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the numpy fallback.

Times the two hot kernels on the same precomputed cover data: the bitset
closure that builds the order matrices, and the full interval gap scan.
Run from a checkout with the package installed:

    python benchmarks/bench_backends.py --n 6
    python benchmarks/bench_backends.py --n 7 --repeat 5
"""

import argparse
import time

import numpy as np

from bruhatkit import _kernels
from bruhatkit._kernels import fallback
from bruhatkit.enumerator import build_order_cache, scan_max_gap


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=6, help="degree to benchmark")
    parser.add_argument("--repeat", type=int, default=3, help="runs per timing")
    parser.add_argument("--jobs", type=int, default=1, help="scan worker count")
    args = parser.parse_args()

    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("note: compiled core not built; timing the fallback alone")

    # cover table built once (shared, pure bookkeeping)
    cache = build_order_cache(args.n, allow_large=args.n >= 8, kernel=fallback)
    lcov_flat, lcov_off = cache.lower_cover_csr()
    up_order = np.argsort(-cache.lengths, kind="stable").astype(np.int32)
    n_elems, words = cache.size, cache.words_per_row

    rows = []
    reference = {}
    for name, kernel in sorted(backends.items()):
        t_closure, up = best_of(
            args.repeat,
            lambda k=kernel: k.closure_bitmatrix(
                n_elems, words, cache.ucov_flat, cache.ucov_off, up_order
            ),
        )
        fresh = build_order_cache(args.n, allow_large=args.n >= 8, kernel=kernel)
        t_scan, result = best_of(
            args.repeat,
            lambda k=kernel, c=fresh: scan_max_gap(args.n, c, jobs=args.jobs, kernel=k),
        )
        reference[name] = (up.copy(), result)
        rows.append((name, t_closure, t_scan))

    if len(reference) == 2:
        up_a, res_a = reference["cython"]
        up_b, res_b = reference["fallback"]
        assert np.array_equal(up_a, up_b), "backends disagree on the closure"
        assert res_a == res_b, "backends disagree on the scan"

    print(
        f"\nS_{args.n}: {n_elems} elements, "
        f"{reference[rows[0][0]][1].intervals_scanned} intervals, "
        f"max gap {reference[rows[0][0]][1].max_gap} "
        f"(best of {args.repeat}, jobs={args.jobs})"
    )
    print(f"{'backend':<10} {'closure':>12} {'full scan':>12}")
    for name, t_closure, t_scan in rows:
        print(f"{name:<10} {t_closure * 1000:>10.1f}ms {t_scan * 1000:>10.1f}ms")
    if len(rows) == 2:
        timings = {name: (tc, ts) for name, tc, ts in rows}
        closure_x = timings["fallback"][0] / timings["cython"][0]
        scan_x = timings["fallback"][1] / timings["cython"][1]
        print(f"{'speedup':<10} {closure_x:>11.1f}x {scan_x:>11.1f}x")
    print()


if __name__ == "__main__":
    main()
