#!/usr/bin/env python3
"""Benchmark the numba-compiled kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py

The same kernels are selected at import time by PAIRSPEC_NUMBA; here both
paths are invoked explicitly so one process measures both.
"""

import time

import numpy as np
from scipy.linalg import schur

from pairspec import kernels, numkit


def _timeit(fn, *args, repeat=3):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_sylvester_triangular(rng, d):
    H = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    A = -1j * (H + H.conj().T) / 2 - 0.05 * np.eye(d)
    TA, _ = schur(A, output="complex")
    TB = TA.conj().T.copy()
    TB, _ = schur(TB, output="complex")
    F = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    t_np, x_np = _timeit(kernels.sylvester_triangular_numpy, TA, TB, F)
    t_nb, x_nb = _timeit(kernels.sylvester_triangular_numba, TA, TB, F)
    agree = np.linalg.norm(x_np - x_nb) / np.linalg.norm(x_np)
    return t_np, t_nb, agree


def bench_rk4(rng, d, steps):
    H = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    W = -1j * (H + H.conj().T) / 2 - 0.01 * np.eye(d)
    theta = 0.5 * np.eye(d, dtype=complex)
    t_np, (x_np, _, _) = _timeit(kernels.rk4_lyapunov_numpy, W, theta, 1e-3, steps)
    t_nb, (x_nb, _, _) = _timeit(kernels.rk4_lyapunov_numba, W, theta, 1e-3, steps)
    agree = np.linalg.norm(x_np - x_nb) / np.linalg.norm(x_np)
    return t_np, t_nb, agree


def bench_trapezoid(rng, d, steps):
    H = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    W = -1j * (H + H.conj().T) / 2 - 0.05 * np.eye(d)
    P = numkit.matrix_exponential(W, 0.05)
    theta = 0.5 * np.eye(d, dtype=complex)
    t_np, (x_np, _) = _timeit(kernels.propagator_trapezoid_numpy, P, theta, steps, 0.05)
    t_nb, (x_nb, _) = _timeit(kernels.propagator_trapezoid_numba, P, theta, steps, 0.05)
    agree = np.linalg.norm(x_np - x_nb) / np.linalg.norm(x_np)
    return t_np, t_nb, agree


def main():
    if not kernels.HAVE_NUMBA:
        print("numba is not importable; nothing to compare")
        return 1
    rng = np.random.default_rng(11)

    # Warm the JIT once so compile time is not billed to the benchmark.
    bench_sylvester_triangular(rng, 8)
    bench_rk4(rng, 6, 10)
    bench_trapezoid(rng, 6, 10)

    print(f"{'kernel':<34s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s} {'rel diff':>9s}")
    for d in (32, 130):
        t_np, t_nb, agree = bench_sylvester_triangular(rng, d)
        print(f"sylvester_triangular d={d:<11d} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x {agree:9.1e}")
    for d, steps in ((8, 20000), (12, 20000)):
        t_np, t_nb, agree = bench_rk4(rng, d, steps)
        print(f"rk4_lyapunov d={d} steps={steps:<7d} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x {agree:9.1e}")
    for d, steps in ((8, 50000), (12, 50000)):
        t_np, t_nb, agree = bench_trapezoid(rng, d, steps)
        print(f"propagator_trapezoid d={d} steps={steps:<6d} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x {agree:9.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
