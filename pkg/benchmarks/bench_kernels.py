"""Benchmark the quadrature hot kernel: numba @njit vs pure numpy.

Usage:
    python benchmarks/bench_kernels.py [--repeats 5]

The kernel evaluates log|shifted theta sum| over an M x M midpoint grid,
which dominates the runtime of the Green-function mean quadrature.  Both
paths are checked against each other before timing.
"""

import argparse
import math
from timeit import default_timer as timer

import numpy as np

from ellgreen import _kernels
from ellgreen.green import green_mean_integral
from ellgreen.lattice import TauPoint
from ellgreen.modular import DEFAULT_TOL, gaussian_half_width

TAU = TauPoint(0.13, 1.32)


def make_grid(m):
    mid = (np.arange(m, dtype=np.float64) + 0.5) / m
    shifted = (mid + 0.5) % 1.0
    return np.repeat(shifted, m), np.tile(shifted, m)


def time_impl(fn, c, d, half, repeats):
    fn(c, d, TAU.re, TAU.im, half)  # warm-up (JIT compile, cache touch)
    best = math.inf
    for _ in range(repeats):
        start = timer()
        fn(c, d, TAU.re, TAU.im, half)
        best = min(best, timer() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    half = gaussian_half_width(TAU.im, DEFAULT_TOL.rel_tol)
    impls = [("numpy", _kernels.log_abs_theta_shifted_numpy)]
    if _kernels.ACTIVE_IMPL == "numba":
        impls.append(("numba", _kernels.log_abs_theta_shifted_grid))
    else:
        print("numba unavailable or disabled (ELLGREEN_DISABLE_NUMBA); "
              "benchmarking numpy only")

    print(f"window half-width: {half} ({2 * half + 1} series terms per point)")
    print(f"{'M':>6} {'points':>10} " +
          " ".join(f"{name + ' (s)':>12}" for name, _ in impls) +
          ("  speedup" if len(impls) == 2 else ""))
    for m in (128, 256, 512):
        c, d = make_grid(m)
        if len(impls) == 2:
            a = impls[0][1](c, d, TAU.re, TAU.im, half)
            b = impls[1][1](c, d, TAU.re, TAU.im, half)
            assert np.max(np.abs(a - b)) < 1e-11, "paths disagree"
        times = [time_impl(fn, c, d, half, args.repeats) for _, fn in impls]
        row = f"{m:>6} {m * m:>10} " + " ".join(f"{t:>12.4f}" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:>7.2f}x"
        print(row)

    start = timer()
    value = green_mean_integral(TAU, 512)
    print(f"\ngreen_mean_integral(tau, 512) = {value:.3e} "
          f"({timer() - start:.3f}s end to end, {_kernels.ACTIVE_IMPL} path)")


if __name__ == "__main__":
    main()
