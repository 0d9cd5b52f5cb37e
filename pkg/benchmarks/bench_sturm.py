"""Compare the compiled tridiagonal counting kernel with the numpy fallback.

Times count_below_batch on random-displacement chain operators of growing
length, checks that both backends return identical counts, and prints a
speedup table.  Run as: python benchmarks/bench_sturm.py
"""

import time

import numpy as np

from rdm_lab import grids, kernels
from rdm_lab._sturm_fallback import count_below_batch as python_kernel
from rdm_lab.sites import DisplacementLaw, default_site, sample_config

try:
    from rdm_lab._sturm import count_below_batch as compiled_kernel
except ImportError:
    compiled_kernel = None


def _chain_operator(extent, m, seed=0):
    site = default_site()
    law = DisplacementLaw(kind="corner_uniform", d_max=site.d_max)
    config = sample_config(law, 1, extent, seed)
    grid = grids.Grid.box(1, extent, m, bc="neumann")
    op = grids.assemble(grid, config, site)
    matrix = op.matrix.tocsr()
    return (
        np.ascontiguousarray(matrix.diagonal(0)),
        np.ascontiguousarray(matrix.diagonal(1)),
    )


def _time(fn, *args, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    print(f"active backend: {kernels.sturm_backend()}")
    if compiled_kernel is None:
        print("compiled kernel unavailable; timing the fallback only")
    energies = np.linspace(-4.0, 10.0, 64)
    header = f"{'n':>9} {'python (s)':>12} {'compiled (s)':>13} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for extent in (50, 500, 5000, 20000):
        diag, off = _chain_operator(extent, 32)
        t_py, (ref, _) = _time(python_kernel, diag, off, energies)
        if compiled_kernel is None:
            print(f"{diag.size:>9} {t_py:>12.4f} {'-':>13} {'-':>8}")
            continue
        t_c, (got, _) = _time(compiled_kernel, diag, off, energies)
        if not np.array_equal(ref, got):
            raise SystemExit(f"backend mismatch at n={diag.size}")
        print(f"{diag.size:>9} {t_py:>12.4f} {t_c:>13.4f} {t_py / t_c:>8.1f}x")
    print("counts agree between backends at every size")


if __name__ == "__main__":
    main()
