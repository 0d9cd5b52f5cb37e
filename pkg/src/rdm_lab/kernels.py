"""Tridiagonal counting kernels with import-time backend selection.

The compiled extension is preferred when present; the numpy fallback keeps
the package usable from a plain source tree.  Both expose identical
semantics, so everything downstream is backend-agnostic.
"""

import logging

import numpy as np

try:
    from ._sturm import count_below_batch as _count_below_batch

    _BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the build
    from ._sturm_fallback import count_below_batch as _count_below_batch

    _BACKEND = "python"

log = logging.getLogger(__name__)


def sturm_backend():
    """Name of the active counting backend: 'compiled' or 'python'."""
    return _BACKEND


def tridiag_count_below(diag, off, energies, max_shifts=3, shift=1e-12):
    """Number of eigenvalues strictly below each energy, O(n) per energy.

    Energies that collide with an eigenvalue of a leading principal minor
    produce a zero pivot; those are retried at ``E + shift`` (recorded via
    the module logger), as the counting contract specifies.
    """
    energies = np.ascontiguousarray(np.atleast_1d(energies), dtype=float)
    diag = np.ascontiguousarray(diag, dtype=float)
    off = np.ascontiguousarray(off, dtype=float)

    counts = np.zeros(energies.shape[0], dtype=np.int64)
    pending_idx = np.arange(energies.shape[0])
    pending_e = energies.copy()
    tries = 0
    while True:
        got, zero = _count_below_batch(diag, off, pending_e)
        counts[pending_idx] = got
        mask = zero.astype(bool)
        if not mask.any() or tries >= max_shifts:
            break
        tries += 1
        log.info(
            "sturm zero pivot at %d energies; retrying with +%g shift",
            int(mask.sum()),
            shift,
        )
        pending_idx = pending_idx[mask]
        pending_e = pending_e[mask] + shift
    return counts
