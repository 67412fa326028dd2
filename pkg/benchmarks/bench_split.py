#!/usr/bin/env python3
"""Benchmark: compiled vs pure-Python split-search kernel.

The split search is the hot inner loop of tree fitting (every node scans
all features over all observed thresholds), so this is where the compiled
kernel pays off. Results are checked for bit-identity while timing.

Usage: python3 benchmarks/bench_split.py [--rows 20000] [--cols 20]
"""

import argparse
import time

import numpy as np

from jstdiff import dtree, jst
from jstdiff._split_backend import load_kernel


def time_scans(kernel, columns, y1, y2, nc, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = []
        for vals, l1, l2 in columns:
            out.append(kernel.scan_dual(vals, l1, nc, l2, nc))
            out.append(kernel.scan_joint(vals, l1, nc, l2, nc))
        best = min(best, time.perf_counter() - t0)
        result = out
    return best, result


def bench_kernels(args):
    rng = np.random.default_rng(args.seed)
    X = rng.uniform(-10, 10, size=(args.rows, args.cols))
    nc = 3
    y1 = rng.integers(0, nc, size=args.rows).astype(np.int64)
    y2 = rng.integers(0, nc, size=args.rows).astype(np.int64)

    columns = []
    for f in range(args.cols):
        order = np.argsort(X[:, f], kind="stable")
        columns.append((np.ascontiguousarray(X[order, f]), y1[order], y2[order]))

    kernels = {}
    try:
        kernels["compiled"] = load_kernel("cy")
    except ImportError:
        print("compiled kernel unavailable; benchmarking pure Python only")
    kernels["python"] = load_kernel("py")

    print(f"\nkernel scans over {args.rows} rows x {args.cols} features "
          f"({nc} classes), best of {args.repeats}:")
    times = {}
    results = {}
    for name, kernel in kernels.items():
        times[name], results[name] = time_scans(
            kernel, columns, y1, y2, nc, args.repeats
        )
        print(f"  {name:>8}: {times[name] * 1e3:9.2f} ms")
    if len(results) == 2:
        assert results["compiled"] == results["python"], "kernels disagree!"
        print(f"  speedup: {times['python'] / times['compiled']:.1f}x "
              "(results bit-identical)")


def bench_full_builds(args):
    rng = np.random.default_rng(args.seed + 1)
    n = min(args.rows, 6000)
    X = rng.uniform(-10, 10, size=(n, min(args.cols, 12)))
    y1 = ((X[:, 0] < 0.4) ^ (X[:, 1] >= 0.9)).astype(np.int64)
    y2 = ((X[:, 0] < -0.2) ^ (X[:, 1] >= 0.9) ^ (X[:, 2] < 1.2)).astype(np.int64)

    print(f"\nend-to-end over {X.shape[0]} rows x {X.shape[1]} features:")
    t0 = time.perf_counter()
    dtree.fit(X, y1, 6)
    print(f"  dtree.fit depth 6: {(time.perf_counter() - t0) * 1e3:9.2f} ms")
    t0 = time.perf_counter()
    jst.build(X, y1, y2, 6)
    print(f"  jst.build depth 6: {(time.perf_counter() - t0) * 1e3:9.2f} ms")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=20000)
    ap.add_argument("--cols", type=int, default=20)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    bench_kernels(args)
    bench_full_builds(args)


if __name__ == "__main__":
    main()
