#!/usr/bin/env python3
"""Time the compiled and pure-Python stiffness kernels on the same inputs.

Usage: python benchmarks/bench_stiffness.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mrplate import Material, QuadGeometry, ResolutionLevel, bending_rigidity
from mrplate._kernels import backend_name, element_stiffness_matrix
from mrplate._kernels.prep import cell_tables


def bench(backend: str, geom, rl, db, quad_order: int, repeat: int) -> float:
    tables = cell_tables(geom, rl, quad_order)
    element_stiffness_matrix(geom, tables, db, backend=backend)  # warm up
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        element_stiffness_matrix(geom, tables, db, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--quad-order", type=int, default=4)
    args = parser.parse_args()

    geom = QuadGeometry(np.array([[0.0, 0.0], [1.2, 0.1], [1.4, 1.1], [-0.1, 0.9]]))
    db, _ = bending_rigidity(Material(E=1.0e4, h=0.1, mu=0.3))
    backends = ["python"] + (["compiled"] if backend_name() == "compiled" else [])

    print(f"{'rl':>8} {'dofs':>6}", *(f"{b:>12}" for b in backends), "speedup" if len(backends) == 2 else "")
    for k in (4, 8, 16, 32):
        rl = ResolutionLevel(k, k)
        times = [bench(b, geom, rl, db, args.quad_order, args.repeat) for b in backends]
        row = f"{str(rl):>8} {rl.num_dofs:>6}" + "".join(f" {t * 1e3:11.2f}ms" for t in times)
        if len(times) == 2:
            row += f" {times[0] / times[1]:6.1f}x"
        print(row)
    if backend_name() != "compiled":
        print("compiled backend unavailable; showing python only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
