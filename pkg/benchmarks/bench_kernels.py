#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the passes that dominate experiment runtime: the whole-universe
tug-of-war counter, the sign-sum behind the F2 control variate, the fused
two-stream pass, and the count-min collision scan. Run from the repo root:

    python3 benchmarks/bench_kernels.py [--n 100000] [--repeat 5]
"""

import argparse
import random
import statistics
import time

import numpy as np

from cvsketch import _pykernels as pk

try:
    from cvsketch import _ckernels as ck
except ImportError:
    ck = None

P = (1 << 61) - 1


def best_of(repeat, fn, *args):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=100_000, help="universe size")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = random.Random(0)
    coeffs = tuple(rng.randrange(P) for _ in range(4))
    coeffs2 = tuple(rng.randrange(P) for _ in range(2))
    counts = np.random.default_rng(0).integers(1, 5000, args.n).astype(np.int64)
    other = np.random.default_rng(1).integers(1, 5000, args.n).astype(np.int64)

    workloads = [
        ("tow_counter_dense (deg 4)", lambda impl: impl.tow_counter_dense(coeffs, P, counts)),
        ("sign_sum (deg 4)", lambda impl: impl.sign_sum(coeffs, P, args.n)),
        ("ip_trial (deg 4, 2 streams)", lambda impl: impl.ip_trial(coeffs, P, counts, other)),
        ("bucket_collision_count (deg 2)",
         lambda impl: impl.bucket_collision_count(coeffs2, P, 32, args.n, 7)),
    ]

    print(f"universe n = {args.n}, best of {args.repeat}")
    header = f"{'workload':34} {'pure':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, call in workloads:
        pure_best, _ = best_of(args.repeat, call, pk)
        if ck is not None:
            comp_best, _ = best_of(args.repeat, call, ck)
            assert call(pk) == call(ck), f"backend mismatch in {name}"
            print(f"{name:34} {pure_best * 1e3:>10.2f}ms {comp_best * 1e3:>10.2f}ms "
                  f"{pure_best / comp_best:>8.1f}x")
        else:
            print(f"{name:34} {pure_best * 1e3:>10.2f}ms {'absent':>12} {'-':>9}")
    if ck is None:
        print("\ncompiled extension not built; run: python3 setup.py build_ext --inplace")


if __name__ == "__main__":
    main()
