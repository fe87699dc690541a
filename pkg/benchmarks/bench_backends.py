#!/usr/bin/env python3
"""Benchmark the compiled path core against the NumPy fallback.

Both backends simulate the same censored-path workloads (statistically
identical, different RNG consumption order); this reports wall time and
steps/second for each, plus the speedup.

Usage:
    python benchmarks/bench_backends.py [--n 4000] [--h 1e-3] [--beta 0.5]
"""

import argparse
import time

from cenfrac import FracOrder, RngStream
from cenfrac.stochastic import _pathcore_py

try:
    from cenfrac.stochastic import _pathcore as _pathcore_cy
except ImportError:
    _pathcore_cy = None


def run(engine, name, x, beta, h, threshold, n, seed, max_steps=10**8):
    gen = RngStream(seed).generator()
    t0 = time.perf_counter()
    lifetimes, res, _ = engine.lifetimes_block(x, beta, h, threshold, n, gen, max_steps)
    elapsed = time.perf_counter() - t0
    steps = float(lifetimes.sum() / h)
    print(
        f"{name:8s} lifetimes: {elapsed:7.3f} s  {steps / elapsed / 1e6:8.2f} Msteps/s"
        f"  mean={lifetimes.mean():.5f}"
    )
    gen = RngStream(seed, 1).generator()
    t0 = time.perf_counter()
    coarse, fine = engine.paired_lifetimes_block(
        x, beta, h, threshold, n // 2, gen, max_steps
    )
    elapsed2 = time.perf_counter() - t0
    print(
        f"{name:8s} paired:    {elapsed2:7.3f} s  "
        f"move={abs(coarse.mean() - fine.mean()) / fine.mean():.2e}"
    )
    return elapsed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4000)
    ap.add_argument("--h", type=float, default=1e-3)
    ap.add_argument("--beta", type=float, default=0.5)
    ap.add_argument("--x", type=float, default=1.0)
    ap.add_argument("--threshold", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    FracOrder(args.beta)  # validate

    print(f"workload: n={args.n} paths, h={args.h}, beta={args.beta}, x={args.x}")
    t_py = run(
        _pathcore_py, "python", args.x, args.beta, args.h, args.threshold,
        args.n, args.seed,
    )
    if _pathcore_cy is None:
        print("compiled core not available; only the fallback was timed")
        return
    t_cy = run(
        _pathcore_cy, "cython", args.x, args.beta, args.h, args.threshold,
        args.n, args.seed,
    )
    print(f"speedup (lifetimes): {t_py / t_cy:.1f}x")


if __name__ == "__main__":
    main()
