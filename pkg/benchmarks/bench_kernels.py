"""Timing comparison of the compiled and NumPy kernel backends.

Run directly:

    python3 benchmarks/bench_kernels.py [--repeats 2000]

Shapes mirror what the simulator actually feeds the kernels: small complex
systems (a handful of antennas times a handful of slots), where Python call
overhead and LAPACK setup dominate, which is exactly why the compiled path
exists.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from doflab import _kernels_np

try:
    from doflab import _kernels_cy
except ImportError:
    _kernels_cy = None


def make_logdet_case(rng, m, k):
    g = (rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))) / np.sqrt(2)
    b = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
    sigma = b @ b.conj().T + np.eye(m)
    return g, sigma


def make_rank_case(rng, m, k):
    return (rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))) / np.sqrt(2)


def bench(fn, cases, repeats):
    fn(*cases[0])  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        for case in cases:
            fn(*case)
    return (time.perf_counter() - start) / (repeats * len(cases))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=2000)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    shapes = [(2, 2), (3, 3), (4, 4), (7, 3), (8, 8), (16, 16)]

    print(f"{'kernel':<22}{'shape':<10}{'numpy':>12}{'cython':>12}{'speedup':>10}")
    for m, k in shapes:
        cases = [make_logdet_case(rng, m, k) for _ in range(8)]
        t_np = bench(_kernels_np.logdet_rate_bits, cases, args.repeats)
        row = f"{'logdet_rate_bits':<22}{f'{m}x{k}':<10}{t_np * 1e6:>10.2f}us"
        if _kernels_cy is not None:
            t_cy = bench(_kernels_cy.logdet_rate_bits, cases, args.repeats)
            row += f"{t_cy * 1e6:>10.2f}us{t_np / t_cy:>9.1f}x"
        else:
            row += f"{'n/a':>12}{'n/a':>10}"
        print(row)
    for m, k in shapes:
        cases = [(make_rank_case(rng, m, k),) for _ in range(8)]
        t_np = bench(_kernels_np.numerical_rank, cases, args.repeats)
        row = f"{'numerical_rank':<22}{f'{m}x{k}':<10}{t_np * 1e6:>10.2f}us"
        if _kernels_cy is not None:
            t_cy = bench(_kernels_cy.numerical_rank, cases, args.repeats)
            row += f"{t_cy * 1e6:>10.2f}us{t_np / t_cy:>9.1f}x"
        else:
            row += f"{'n/a':>12}{'n/a':>10}"
        print(row)

    if _kernels_cy is None:
        print("\ncompiled backend not built; only the NumPy path was timed")


if __name__ == "__main__":
    main()
