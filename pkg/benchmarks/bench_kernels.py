#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the pure-numpy fallback.

Times the two hot paths (boundary orbit accumulation, interior forward pass)
on the slow default family at a few sizes and prints a speedup table.

    python benchmarks/bench_kernels.py [--steps 100000] [--angles 100] [--grid-points 1024]
"""

import argparse
import time

import numpy as np

from blaschke import _kernels_py
from blaschke.counterexample import RadiiSpec, build_sequence
from blaschke.diagnostics import polar_grid
from blaschke.kernels import COMPILED, generator_arrays

try:
    from blaschke import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def time_call(fn, *args, repeats=3):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench(n_steps, n_angles, n_points):
    seq = build_sequence(RadiiSpec(), n=n_steps)
    arrays = generator_arrays(seq)
    angles = (np.arange(n_angles) + 0.5) * (2 * np.pi / n_angles)
    cps = np.arange(n_steps // 10, n_steps + 1, n_steps // 10, dtype=np.int64)
    pts = polar_grid(0.5, max(2, n_points // 64), 64)[:n_points]

    rows = []
    orbit_args = (arrays.m, arrays.rot_arg, arrays.zero_r, arrays.zero_theta,
                  arrays.offsets, angles, cps)
    disc_args = (arrays.m, arrays.rot, arrays.zeros, arrays.offsets, pts, cps)

    t_py = time_call(_kernels_py.orbit_psi_checkpoints, *orbit_args)
    rows.append(("orbit", "python", t_py, 1.0))
    if _kernels_c is not None:
        t_c = time_call(_kernels_c.orbit_psi_checkpoints, *orbit_args)
        rows.append(("orbit", "compiled", t_c, t_py / t_c))

    t_py = time_call(_kernels_py.disc_forward_checkpoints, *disc_args)
    rows.append(("disc", "python", t_py, 1.0))
    if _kernels_c is not None:
        t_c = time_call(_kernels_c.disc_forward_checkpoints, *disc_args)
        rows.append(("disc", "compiled", t_c, t_py / t_c))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--steps", type=int, default=100000)
    parser.add_argument("--angles", type=int, default=100)
    parser.add_argument("--grid-points", type=int, default=1024)
    args = parser.parse_args()

    print(f"compiled extension available: {_kernels_c is not None} (dispatch uses "
          f"{'compiled' if COMPILED else 'python'})")
    print(f"steps={args.steps} angles={args.angles} grid_points={args.grid_points}")
    print(f"{'kernel':8s} {'impl':9s} {'seconds':>10s} {'speedup':>8s}")
    for kernel, impl, secs, speedup in bench(args.steps, args.angles, args.grid_points):
        print(f"{kernel:8s} {impl:9s} {secs:10.3f} {speedup:7.1f}x")


if __name__ == "__main__":
    main()
