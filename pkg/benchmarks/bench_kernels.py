"""Throughput comparison of the numba and numpy walk kernels.

Usage: python benchmarks/bench_kernels.py [--n 65536] [--repeats 3]
"""

import argparse
import time

import numpy as np

from wosq import engine, samplers
from wosq._kernels import get_backend
from wosq.experiments import builtin_example

CASES = ("disk", "gasket", "ball", "sector")


def bench(backend, ex, points, repeats):
    geom = ex.domain.encode()
    mode = engine.MODES[ex.kind]
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        backend.walk_batch(points, ex.z0, ex.eps, ex.max_steps, geom, mode,
                           ex.domain.tol)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1 << 16)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    nb = get_backend("numba")
    npy = get_backend("numpy")
    print(f"{'example':<10}{'walks':>9}{'numba':>12}{'numpy':>12}{'speedup':>9}")
    for name in CASES:
        ex = builtin_example(name)
        spec = samplers.SamplerSpec("mc", dim=ex.sampler_dim, seed=0)
        points = samplers.generate(spec, args.n)
        bench(nb, ex, points[:64], 1)  # trigger compilation
        t_nb = bench(nb, ex, points, args.repeats)
        t_np = bench(npy, ex, points, args.repeats)
        print(f"{name:<10}{args.n:>9}{t_nb:>11.3f}s{t_np:>11.3f}s"
              f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
