"""Pure-numpy Sturm counter, vectorized over the energy batch.

Semantics match the compiled kernel in ``_sturm.pyx`` exactly: same pivot
recursion, same zero-pivot flagging, same strict-inequality count.
"""

import numpy as np

_TINY = 1e-300


def count_below_batch(diag, off, energies):
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    energies = np.asarray(energies, dtype=float)
    n = diag.shape[0]
    if off.shape[0] != n - 1:
        raise ValueError("off-diagonal length must be n - 1")

    off2 = off * off
    zero = np.zeros(energies.shape, dtype=np.uint8)
    d = diag[0] - energies
    hit = d == 0.0
    if hit.any():
        zero[hit] = 1
        d = np.where(hit, -_TINY, d)
    counts = (d < 0.0).astype(np.int64)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for i in range(1, n):
            d = (diag[i] - energies) - off2[i - 1] / d
            hit = d == 0.0
            if hit.any():
                zero[hit] = 1
                d = np.where(hit, -_TINY, d)
            counts += d < 0.0
    return counts, zero
