"""Benchmark the batch quantile kernel: numba @njit vs pure numpy.

Usage:
    python benchmarks/bench_kernels.py [--resolution 500] [--n 4] [--repeats 5]

The workload is the grid-oracle inner loop on a ternary instance: evaluate the
upper-median of terminal wealth at every lattice point of the simplex.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qkelly.kernels import (
    HAVE_NUMBA,
    instance_kernel_data,
    log_wealth,
    quantile_batch,
    simplex_lattice,
)
from qkelly.model import validate_instance


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--resolution", type=int, default=500)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    inst = validate_instance(3, ("3/5", "3/10", "1/10"), ("1/3", "1/3", "1/3"), args.n, "1/2")
    points = simplex_lattice(inst.q, inst.m, args.resolution)
    logw = log_wealth(points)
    K, probs = instance_kernel_data(inst)
    alpha = float(inst.alpha)
    print(f"lattice points: {len(points)}, monomials per point: {len(K)}")

    def bench(force):
        quantile_batch(logw[:128], K, probs, alpha, force=force)  # warm up / compile
        best = float("inf")
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            vals = quantile_batch(logw, K, probs, alpha, force=force)
            best = min(best, time.perf_counter() - t0)
        return best, vals

    t_numpy, v_numpy = bench("numpy")
    print(f"numpy   : {t_numpy*1e3:9.2f} ms  ({len(points)/t_numpy:,.0f} points/s)")
    if HAVE_NUMBA:
        t_numba, v_numba = bench("numba")
        print(f"numba   : {t_numba*1e3:9.2f} ms  ({len(points)/t_numba:,.0f} points/s)")
        print(f"speedup : {t_numpy/t_numba:.2f}x")
        if not np.allclose(v_numpy, v_numba, rtol=1e-9, atol=0):
            print("WARNING: kernel outputs disagree beyond 1e-9")
            return 1
    else:
        print("numba   : not installed (QKELLY_PURE_NUMPY path only)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
