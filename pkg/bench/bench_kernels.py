#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Runs each hot kernel on a representative workload with both backends
(independent of the CHIRALRMT_NO_NUMBA selection) and prints a timing
table.  Usage:

    python bench/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import time

import numpy as np

from chiralrmt.kernels import NUMBA_AVAILABLE, NUMBA_IMPLS, NUMPY_IMPLS


def _time(fn, *args, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _workloads():
    rng = np.random.default_rng(0)
    u = np.ascontiguousarray(rng.uniform(0.05, 900.0, size=20000))
    v = np.ascontiguousarray(rng.uniform(0.05, 900.0, size=20000))
    x = np.ascontiguousarray(np.sort(rng.normal(scale=7.0, size=100)))
    normals = rng.standard_normal((200, 100))
    uniforms = rng.random((200, 100))
    return [
        ("phi_sumsq (m=500, 20k pts)", "phi_sumsq", (500, 1.5, u)),
        ("phi_pairsum (m=500, 20k pts)", "phi_pairsum", (500, 1.5, u, v)),
        ("phi_block (kmax=200, 20k pts)", "phi_block", (200, 0.5, u)),
        ("log_joint (n=100)", "log_joint", (x, 2.0)),
        ("sweep_block (n=100, 200 sweeps)", "sweep_block", (x, 2.0, 0.35, normals, uniforms)),
    ]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions (best-of)")
    args = parser.parse_args()

    if not NUMBA_AVAILABLE:
        print("numba unavailable: nothing to compare against the numpy path")
        return 1

    # trigger JIT compilation outside the timed region
    for _, name, wargs in _workloads():
        cargs = tuple(a.copy() if isinstance(a, np.ndarray) else a for a in wargs)
        NUMBA_IMPLS[name](*cargs)

    print(f"{'kernel':<34} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for label, name, wargs in _workloads():
        times = {}
        for impl_name, impls in (("numpy", NUMPY_IMPLS), ("numba", NUMBA_IMPLS)):
            # sweep_block mutates its state vector: give each run a fresh copy
            cargs = tuple(a.copy() if isinstance(a, np.ndarray) else a for a in wargs)
            times[impl_name] = _time(impls[name], *cargs, repeat=args.repeat)
        speedup = times["numpy"] / times["numba"]
        print(f"{label:<34} {times['numpy'] * 1e3:>8.2f}ms {times['numba'] * 1e3:>8.2f}ms {speedup:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
