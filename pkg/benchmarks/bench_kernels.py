"""Benchmark the numba kernels against the pure-numpy fallback.

Run: python3 benchmarks/bench_kernels.py [--q 29] [--repeats 3]

Builds the block complex once, prepares the kernel inputs, then times the
three hot kernels on both backends. The first numba call compiles (cached
on disk), so a warmup call precedes timing.
"""

import argparse
import time

import numpy as np

from hyperblock import _kernels, build_cellulation, build_scheme, make_field
from hyperblock.cellulation import _strong_regularity_inputs
from hyperblock.scheme import edge_adjacency


def bench(label, fn, repeats):
    fn()  # warmup (numba compilation, cache population)
    best = min(timed(fn) for _ in range(repeats))
    print(f"  {label:<10} {best * 1000:10.2f} ms")
    return best


def timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, default=29)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    print(f"building X_q for q={args.q} ...")
    t0 = time.perf_counter()
    cell = build_cellulation(make_field(args.q))
    scheme = build_scheme(cell.table, cell.cusps, cell.transversal)
    print(f"  built in {time.perf_counter() - t0:.2f}s: "
          f"{len(cell.cusps)} cusps, {len(cell.blocks)} blocks, m={scheme.m}")

    C = scheme.class_matrix
    n = scheme.n_classes
    sr_inputs, dup = _strong_regularity_inputs(cell)
    assert dup is None
    A = edge_adjacency(cell)

    results = {}
    for backend in ("numpy", "numba"):
        if backend == "numba" and not _kernels.numba_available():
            print("numba not importable; skipping")
            continue
        print(f"backend: {backend}")
        results[backend, "scheme"] = bench(
            "scheme",
            lambda: _kernels.scheme_intersection_tables(C, n, backend=backend),
            args.repeats,
        )
        results[backend, "strongreg"] = bench(
            "strongreg",
            lambda: _kernels.strong_regularity_scan(*sr_inputs, backend=backend),
            args.repeats,
        )
        results[backend, "jacobi"] = bench(
            "jacobi",
            lambda: _kernels.jacobi_eigh(A, backend=backend),
            args.repeats,
        )
    if ("numba", "scheme") in results:
        print("speedup (numpy / numba):")
        for kernel in ("scheme", "strongreg", "jacobi"):
            ratio = results["numpy", kernel] / results["numba", kernel]
            print(f"  {kernel:<10} {ratio:8.1f}x")


if __name__ == "__main__":
    main()
