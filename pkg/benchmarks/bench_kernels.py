#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback path.

Run:  python benchmarks/bench_kernels.py [--quick]

The same workloads are timed on both implementations (identical algorithms,
independent RNG streams); the numpy path is what you get with CALTOL_NUMBA=0.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from caltol import _kernels as K


def _time(fn, repeats):
    fn()  # warm-up (JIT compilation on the numba path)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    if not K._have_numba:
        print("numba unavailable; nothing to compare")
        return

    rng = np.random.default_rng(0)
    n = 22
    ys = np.sort(rng.normal(size=n))
    draws = 1000 if args.quick else 4000
    burn = 300 if args.quick else 1000
    nboot = 50 if args.quick else 200
    boot = rng.choice(ys, size=(nboot, n), replace=True)
    seeds = np.arange(nboot, dtype=np.int64)
    reps_fast = 20 if args.quick else 50

    cases = [
        ("slice_chain_1d (n=22)",
         lambda: K._nb_slice_chain_1d(ys, 0.9, 2.0, 0, 0.0, 0.0, ys[-3], 1.3,
                                      draws, burn, 1, 7),
         lambda: K._np_slice_chain_1d(ys, 0.9, 2.0, 0, 0.0, 0.0, ys[-3], 1.3,
                                      draws, burn, 1, 7),
         reps_fast, 1),
        ("mh_chain_2d (n=22)",
         lambda: K._nb_mh_chain_2d(ys, 0.25, 0.75, 2.0, 0, 0.0, 0.0, 0, 0.0, 0.0,
                                   -0.6, 0.3, 0.2, 0.3, draws, burn, 1, 7),
         lambda: K._np_mh_chain_2d(ys, 0.25, 0.75, 2.0, 0, 0.0, 0.0, 0, 0.0, 0.0,
                                   -0.6, 0.3, 0.2, 0.3, draws, burn, 1, 7),
         reps_fast, 1),
        (f"coverage_one_sided (B={nboot})",
         lambda: K._nb_coverage_one_sided(boot, 0.9, 2.0, 0, 0.0, 0.0, 0.1, 1,
                                          ys[-3], 0, 800, 300, 1, 1.0, seeds),
         lambda: K._np_coverage_one_sided(boot, 0.9, 2.0, 0, 0.0, 0.0, 0.1, 1,
                                          ys[-3], 0, 800, 300, 1, 1.0, seeds),
         5, 1),
    ]

    print(f"{'kernel':<32} {'numba (ms)':>12} {'numpy (ms)':>12} {'speedup':>9}")
    for name, nb_fn, np_fn, nb_reps, np_reps in cases:
        t_nb = _time(nb_fn, nb_reps) * 1e3
        t_np = _time(np_fn, np_reps) * 1e3
        print(f"{name:<32} {t_nb:>12.2f} {t_np:>12.2f} {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
