# cython: boundscheck=False, wraparound=False, cdivision=True
"""Sturm-sequence eigenvalue counting for symmetric tridiagonal matrices.

The LDL^T recursion d_i = (a_i - E) - b_{i-1}^2 / d_{i-1} yields the inertia
of T - E I; the number of negative pivots equals the number of eigenvalues
strictly below E.  IEEE semantics carry the recursion through huge pivots;
an exact zero pivot is flagged so the caller can retry at a shifted energy.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def count_below_batch(double[::1] diag, double[::1] off, double[::1] energies):
    """Count eigenvalues strictly below each energy.

    Returns ``(counts, zero_pivot)`` where ``zero_pivot`` marks energies whose
    factorization hit an exact zero pivot.
    """
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t ne = energies.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(ne, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] zero = np.zeros(ne, dtype=np.uint8)
    cdef cnp.int64_t[::1] counts_v = counts
    cdef cnp.uint8_t[::1] zero_v = zero
    cdef double tiny = 1e-300
    cdef double e, d, b2
    cdef Py_ssize_t i, j
    cdef cnp.int64_t c

    if off.shape[0] != n - 1:
        raise ValueError("off-diagonal length must be n - 1")

    for j in range(ne):
        e = energies[j]
        d = diag[0] - e
        if d == 0.0:
            zero_v[j] = 1
            d = -tiny
        c = 1 if d < 0.0 else 0
        for i in range(1, n):
            b2 = off[i - 1] * off[i - 1]
            d = (diag[i] - e) - b2 / d
            if d == 0.0:
                zero_v[j] = 1
                d = -tiny
            if d < 0.0:
                c += 1
        counts_v[j] = c
    return counts, zero
