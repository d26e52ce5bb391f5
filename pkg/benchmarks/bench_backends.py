#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Times the segmented wheel sieve + per-prime fold (the long-range ratio
accumulation), the modular linear-algebra kernels in isolation, and a full
character-table computation, under each backend.  Run from the repo root:

    python benchmarks/bench_backends.py [--limit 1e8] [--matrix 200] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from codsum import kernels
from codsum.analytic import accumulate_ratio
from codsum.chartab import dixon_table, enumerate_group
from codsum.groups import build_cyclic


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_backend(name: str, limit: int, matrix: int, repeat: int) -> dict:
    kernels.set_backend(name)
    out = {"backend": name}

    accumulate_ratio(10**4)  # compile/warm before timing
    out["ratio_accumulate"] = best_of(repeat, lambda: accumulate_ratio(limit))

    rng = np.random.default_rng(7)
    ell = 9473
    a = rng.integers(0, ell, size=(matrix, matrix), dtype=np.int64)
    kernels.rref_mod(a, ell)
    out["rref_mod"] = best_of(repeat, lambda: kernels.rref_mod(a, ell))
    kernels.hessenberg_charpoly(a, ell)
    out["hessenberg_charpoly"] = best_of(
        repeat, lambda: kernels.hessenberg_charpoly(a, ell)
    )
    coeffs = kernels.hessenberg_charpoly(a, ell)
    out["poly_roots_mod"] = best_of(repeat, lambda: kernels.poly_roots_mod(coeffs, ell))

    spec = build_cyclic(150)
    g = enumerate_group(spec)
    dixon_table(g)
    out["dixon_C150"] = best_of(repeat, lambda: dixon_table(g))
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--limit", type=float, default=1e8, help="sieve range")
    parser.add_argument("--matrix", type=int, default=200, help="kernel matrix size")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    limit = int(args.limit)

    backends = ["numpy"]
    if kernels.numba_impl() is not None:
        backends.append("numba")
    else:
        print("numba unavailable; timing the numpy fallback only")

    rows = [bench_backend(name, limit, args.matrix, args.repeat) for name in backends]
    keys = [k for k in rows[0] if k != "backend"]
    width = max(len(k) for k in keys) + 2
    header = "kernel".ljust(width) + "".join(f"{r['backend']:>12}" for r in rows)
    if len(rows) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for key in keys:
        line = key.ljust(width) + "".join(f"{r[key]:>11.4f}s" for r in rows)
        if len(rows) == 2 and rows[1][key] > 0:
            line += f"{rows[0][key] / rows[1][key]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
