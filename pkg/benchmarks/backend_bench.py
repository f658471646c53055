#!/usr/bin/env python3
"""Benchmark the numba training kernel against the pure-Python fallback.

Trains every sample product with both backends at identical settings,
verifies the Q tables match bitwise, and reports wall times.  The numba
column is measured twice: cold (first call, includes JIT compilation)
and warm.

Usage:
    python benchmarks/backend_bench.py [--episodes N] [--products N]
"""

import argparse
import dataclasses
import time

import numpy as np

from pricelab._kernels import HAVE_NUMBA
from pricelab.catalog import sample_catalog
from pricelab.domain import default_price_grid
from pricelab.experiment import derive_product_seed
from pricelab.qlearn import Hyperparams, train


def run_backend(specs, hp_base, backend):
    tables = []
    t0 = time.perf_counter()
    for index, spec in enumerate(specs):
        grid = default_price_grid(spec)
        hp = dataclasses.replace(hp_base, seed=derive_product_seed(0, index))
        q, _ = train(spec, grid, hp=hp, backend=backend)
        tables.append(q.values)
    return time.perf_counter() - t0, tables


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--episodes", type=int, default=10_000)
    parser.add_argument("--products", type=int, default=14)
    args = parser.parse_args()

    specs = sample_catalog()[: args.products]
    hp = Hyperparams(episodes=args.episodes)
    steps = args.episodes * hp.steps_per_episode * len(specs)
    print(f"{len(specs)} products x {args.episodes} episodes x {hp.steps_per_episode} steps "
          f"= {steps:,} Q updates per backend\n")

    t_python, tables_python = run_backend(specs, hp, "python")
    print(f"python backend:      {t_python:8.3f} s   ({steps / t_python / 1e6:6.2f} M steps/s)")

    if not HAVE_NUMBA:
        print("numba backend:       not installed (pip install pricelab[speed])")
        return

    t_cold, _ = run_backend(specs[:1], hp, "numba")
    print(f"numba cold (1 prod): {t_cold:8.3f} s   (includes JIT compilation)")

    t_numba, tables_numba = run_backend(specs, hp, "numba")
    print(f"numba warm:          {t_numba:8.3f} s   ({steps / t_numba / 1e6:6.2f} M steps/s)")
    print(f"\nwarm speedup: {t_python / t_numba:.1f}x")

    identical = all(np.array_equal(a, b) for a, b in zip(tables_python, tables_numba))
    print(f"bitwise identical Q tables: {identical}")
    if not identical:
        raise SystemExit("backend mismatch")


if __name__ == "__main__":
    main()
