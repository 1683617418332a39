"""Benchmark the compiled kernels against the pure-NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 500,1000,2000]

Runs the three O(N^2) kernels through both backends on identical inputs,
checks agreement, and prints a timing table.  The compiled path honors
TRACELAB_THREADS.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from tracelab import kernels
from tracelab.kernels import (
    _convolve_same_np,
    _maximal_means_np,
    _seminorm_row_partials_np,
    pairwise_tree_sum,
)


def _time(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_seminorm(n, rng):
    v = rng.standard_normal(n)
    c = rng.standard_normal((n, 2))
    w = np.full(n, 1.0 / n)
    if kernels.backend_name() == "compiled":
        from tracelab import _speedups

        tc, pc = _time(
            lambda: _speedups.seminorm_row_partials(
                v, c, w, 2.5, 2.0, 256, kernels.thread_count()
            )
        )
    else:
        tc, pc = float("nan"), None
    tp, pp = _time(lambda: _seminorm_row_partials_np(v, c, w, 2.5, 2.0, 256))
    rel = (
        abs(pairwise_tree_sum(pc) - pairwise_tree_sum(pp))
        / abs(pairwise_tree_sum(pp))
        if pc is not None
        else float("nan")
    )
    return tc, tp, rel


def bench_convolve(n, rng):
    m = int(np.sqrt(n))
    fw = rng.standard_normal((m, m))
    kern = rng.standard_normal((2 * m - 1, 2 * m - 1))
    if kernels.backend_name() == "compiled":
        from tracelab import _speedups

        tc, oc = _time(lambda: _speedups.convolve_same_2d(fw, kern, kernels.thread_count()))
    else:
        tc, oc = float("nan"), None
    tp, op_ = _time(lambda: _convolve_same_np(fw, kern))
    rel = float(np.max(np.abs(oc - op_))) if oc is not None else float("nan")
    return tc, tp, rel


def bench_maximal(n, rng):
    m = int(np.sqrt(n))
    ax = 0.05 * np.arange(m)
    coords = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
    absf = np.abs(rng.standard_normal(coords.shape[0]))
    radii = 0.05 * np.arange(1, m)
    if kernels.backend_name() == "compiled":
        from tracelab import _speedups

        tc, oc = _time(lambda: _speedups.maximal_means(absf, coords, radii, kernels.thread_count()))
    else:
        tc, oc = float("nan"), None
    tp, op_ = _time(lambda: _maximal_means_np(absf, coords, radii))
    rel = float(np.max(np.abs(oc - op_))) if oc is not None else float("nan")
    return tc, tp, rel


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="500,1000,2000")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)
    print(f"backend: {kernels.backend_name()}, threads: {kernels.thread_count()}")
    header = f"{'kernel':<12}{'N':>7}{'compiled':>12}{'numpy':>12}{'speedup':>9}{'max diff':>11}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        for name, fn in (
            ("seminorm", bench_seminorm),
            ("convolve2d", bench_convolve),
            ("maximal", bench_maximal),
        ):
            tc, tp, rel = fn(n, rng)
            speed = tp / tc if tc == tc and tc > 0 else float("nan")
            print(f"{name:<12}{n:>7}{tc:>11.4f}s{tp:>11.4f}s{speed:>8.1f}x{rel:>11.2e}")


if __name__ == "__main__":
    main()
