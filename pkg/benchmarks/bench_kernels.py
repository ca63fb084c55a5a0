#!/usr/bin/env python3
"""Benchmark the hot kernels: numba @njit versus the pure-numpy fallback.

The dominant costs in this package are the cosine mode sums feeding the
brute-force tail energies and the series evaluations feeding the error
measurements.  This script times both backends on production-sized
inputs and reports the speedup.

Usage: python benchmarks/bench_kernels.py [--k-max 4096] [--repeats 3]
"""

import argparse
import math
import time

import numpy as np

from cosadmit._kernels import available_backends, implementations


def _timeit(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(k_max: int, repeats: int) -> None:
    rng = np.random.default_rng(0)
    L = 4.0
    phase = math.pi / (2.0 * L)
    n_modes = k_max + 1

    # Shapes mirror brute_force_B at this k_max: 6-point GL on 2*k_max
    # panels, and measure_error on a 4*k_max panel grid.
    n_nodes = 12 * k_max
    wf = rng.normal(size=n_nodes) * 1e-3
    alt = rng.normal(size=n_nodes) * 1e-3
    t = np.sort(rng.uniform(0.0, 2 * L, size=n_nodes))

    n_eval = 24 * k_max
    coeffs = rng.normal(size=n_modes) / (1.0 + np.arange(n_modes) ** 2)
    xs = np.linspace(0.0, 2 * L, n_eval)

    ka, kb = rng.normal(size=257), rng.normal(size=257)

    cases = {
        "cosine_mode_sums_parity": lambda impl: impl["cosine_mode_sums_parity"](
            wf, alt, t, phase, n_modes),
        "cosine_mode_sums": lambda impl: impl["cosine_mode_sums"](
            wf, t, phase, n_modes),
        "cos_series_sum": lambda impl: impl["cos_series_sum"](coeffs, phase, xs),
        "box_complement_sum_2d": lambda impl: impl["box_complement_sum_2d"](
            ka, ka, kb, kb),
    }

    backends = {name: implementations(name) for name in available_backends()}
    print(f"k_max = {k_max}: {n_nodes} quadrature nodes, {n_modes} modes, "
          f"{n_eval} evaluation points")
    header = f"{'kernel':<26}" + "".join(f"{n:>12}" for n in backends) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for case, runner in cases.items():
        times = {}
        ref = None
        for name, impl in backends.items():
            runner(impl)  # warm-up (includes JIT compilation)
            times[name], out = _timeit(lambda: runner(impl), repeats)
            out = np.atleast_1d(np.asarray(out, dtype=float))
            if ref is None:
                ref = out
            else:
                worst = float(np.max(np.abs(out - ref)))
                assert worst < 1e-9, f"{case}: backends disagree by {worst}"
        row = f"{case:<26}" + "".join(f"{times[n]*1e3:>10.1f}ms" for n in backends)
        if len(times) == 2:
            a, b = times.values()
            row += f"{b / a:>9.2f}x"
        print(row)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--k-max", type=int, default=4096)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    bench(args.k_max, args.repeats)
