#!/usr/bin/env python3
"""Benchmark the jitted kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py [--repeat 5]
Set REGLAB_NO_NUMBA=1 to check what the fallback-only configuration does.
"""

import argparse
import time

import numpy as np

from reglab import _kernels as K
from reglab.young import _restricted_lags


def timeit(fn, *args, repeat=5):
    fn(*args)  # warm-up (and jit compile)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"active backend: {K.backend_name()}")
    rows = []

    for n in (1024, 2048):
        v = np.cumsum(rng.standard_normal(n + 1)) * np.sqrt(1.0 / n)
        rows.append((f"holder_full n={n}", K._holder_full_np, (v, 1.0 / n, 0.45)))
    n = 4096
    v = np.cumsum(rng.standard_normal(n + 1)) * np.sqrt(1.0 / n)
    lags = _restricted_lags(n)
    rows.append((f"holder_lags n={n}", K._holder_lags_np, (v, 1.0 / n, 0.45, lags)))

    u = rng.integers(0, 3**20, size=200 * 4096).astype(np.int64)
    rows.append(("cantor_from_lattice 819k", K._cantor_from_lattice_np, (u, 20)))
    x = rng.random(200 * 4096) * 3.0**20
    rows.append(("cantor_member 819k", K._cantor_member_np, (x, 20)))

    nb_map = {}
    if K.NUMBA_ENABLED:
        nb_map = {
            K._holder_full_np: K._holder_full_nb,
            K._holder_lags_np: K._holder_lags_nb,
            K._cantor_from_lattice_np: K._cantor_from_lattice_nb,
            K._cantor_member_np: K._cantor_member_nb,
        }

    print(f"{'kernel':<28} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, np_fn, fargs in rows:
        t_np = timeit(np_fn, *fargs, repeat=args.repeat)
        if nb_map:
            t_nb = timeit(nb_map[np_fn], *fargs, repeat=args.repeat)
            print(f"{name:<28} {t_np*1e3:9.2f}ms {t_nb*1e3:9.2f}ms {t_np/t_nb:7.1f}x")
        else:
            print(f"{name:<28} {t_np*1e3:9.2f}ms {'-':>10} {'-':>8}")

    dw = rng.standard_normal(n) * np.sqrt(1.0 / n)
    t_v = timeit(K.volterra_sum, v, dw, repeat=args.repeat)
    print(f"{'volterra_sum (convolve)':<28} {t_v*1e3:9.2f}ms {'shared':>10}")


if __name__ == "__main__":
    main()
