"""Eigenpair extraction and spectral counting for discrete operators.

Dispatch favors deterministic LAPACK paths: Sturm counting for tridiagonal
matrices, banded reduction when the profile is narrow, dense subset solves
up to the oracle cap, and shift-invert Lanczos with a fixed start vector
only for large matrices without useful structure (periodic wrap).  The
contract is the residual bound, not the algorithm.
"""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import CapacityError, ConvergenceError
from .grids import DiscreteOperator
from .kernels import tridiag_count_below

DENSE_CAP = 4096
ITER_CAP = 5000
K_CAP = 20
_BAND_CAP = 640
_DENSE_PREF = 900
_CLUSTER_RTOL = 1e-9
# dsbtrd/dsbevx reduce in ~n^2 bw flops at bulge-chasing (memory-bound)
# throughput; past this budget shift-invert Lanczos (factor O(n bw^2),
# iterate O(n bw)) is orders of magnitude faster
_BANDED_FLOP_CAP = 1e8
_ENUM_CAP = 64


@dataclasses.dataclass
class EigenResult:
    """Ascending eigenvalues with orthonormal vectors and diagnostics.

    ``iterations`` is 0 for direct solvers; the Lanczos path does not report
    its restart count and records -1.  ``clusters`` groups indices whose
    values coincide to 1e-9 relative; downstream perturbation sums treat a
    cluster as one eigenspace.
    """

    values: np.ndarray
    vectors: np.ndarray
    residual_norms: np.ndarray
    iterations: int
    clusters: list


def _as_matrix(op):
    if isinstance(op, DiscreteOperator):
        return op.matrix
    return sp.csr_matrix(op)


def _bandwidth(matrix):
    coo = matrix.tocoo()
    if coo.nnz == 0:
        return 0
    return int(np.max(np.abs(coo.row - coo.col)))


def gershgorin_bounds(matrix):
    """(lower, upper) bounds on the spectrum from row sums."""
    d = matrix.diagonal()
    abs_sum = np.asarray(abs(matrix).sum(axis=1)).ravel()
    radius = abs_sum - np.abs(d)
    return float(np.min(d - radius)), float(np.max(d + radius))


def _banded_lower(matrix, bw):
    n = matrix.shape[0]
    ab = np.zeros((bw + 1, n))
    for k in range(bw + 1):
        ab[k, : n - k] = matrix.diagonal(-k)
    return ab


def _check_symmetric(matrix):
    if (matrix != matrix.T).nnz != 0:
        raise ValueError("operator matrix must be exactly symmetric")


def _shift_sigma(op, matrix):
    """A point strictly below the spectrum, as close to it as cheaply known.

    For assembled operators -Delta >= 0 gives lambda_min >= min V, so
    min V - 1 is a tight shift; the Gershgorin bound (off by the 4d/h^2
    diagonal of the Laplacian) would cripple the spectral transform.
    """
    if isinstance(op, DiscreteOperator):
        return float(np.min(op.potential_values)) - 1.0
    lo, _ = gershgorin_bounds(matrix)
    return lo - 1.0


def smallest_eigs(op, k, tol=1e-8):
    """k smallest eigenpairs, values ascending, vectors unit and sign-fixed.

    Raises ConvergenceError when the residual bound tol * ||A|| cannot be
    certified within the iteration cap.
    """
    matrix = _as_matrix(op)
    n = matrix.shape[0]
    if not (1 <= k <= min(K_CAP, n)):
        raise ValueError(f"k must lie in [1, min({K_CAP}, n)]")
    _check_symmetric(matrix)
    lo, hi = gershgorin_bounds(matrix)
    scale = max(abs(lo), abs(hi), 1.0)

    bw = _bandwidth(matrix)
    iterations = 0
    if bw <= 1:
        w, v = la.eigh_tridiagonal(
            matrix.diagonal(0),
            matrix.diagonal(1),
            select="i",
            select_range=(0, k - 1),
        )
    elif n <= _DENSE_PREF:
        w, v = la.eigh(matrix.toarray(), subset_by_index=(0, k - 1))
    elif bw <= _BAND_CAP and float(n) * n * bw <= _BANDED_FLOP_CAP:
        w, v = la.eig_banded(
            _banded_lower(matrix, bw),
            lower=True,
            select="i",
            select_range=(0, k - 1),
        )
    else:
        iterations = -1
        v0 = np.full(n, 1.0 / np.sqrt(n))
        try:
            w, v = spla.eigsh(
                matrix.tocsc(),
                k=k,
                sigma=_shift_sigma(op, matrix),
                which="LM",
                v0=v0,
                maxiter=ITER_CAP,
                tol=tol,
            )
        except spla.ArpackNoConvergence as exc:
            if n <= DENSE_CAP:
                iterations = 0
                w, v = la.eigh(matrix.toarray(), subset_by_index=(0, k - 1))
            else:
                best = None
                if exc.eigenvalues is not None and len(exc.eigenvalues):
                    best = float(len(exc.eigenvalues))
                raise ConvergenceError(
                    f"Lanczos failed to converge within {ITER_CAP} iterations",
                    best_residual=best,
                ) from exc

    order = np.argsort(w)
    w = np.asarray(w, dtype=float)[order]
    v = np.asarray(v, dtype=float)[:, order]

    # unit norm and deterministic sign: largest-magnitude component positive
    for j in range(v.shape[1]):
        col = v[:, j]
        nrm = np.linalg.norm(col)
        if nrm > 0:
            col /= nrm
        pivot = int(np.argmax(np.abs(col)))
        if col[pivot] < 0:
            col *= -1.0
        v[:, j] = col

    residuals = np.array(
        [np.linalg.norm(matrix @ v[:, j] - w[j] * v[:, j]) for j in range(k)]
    )
    if np.any(residuals > tol * scale):
        raise ConvergenceError(
            f"residual {residuals.max():.3e} exceeds {tol:.1e} * ||A||",
            best_residual=float(residuals.max()),
        )

    clusters = []
    group = [0]
    for i in range(1, k):
        gap_tol = _CLUSTER_RTOL * max(1.0, abs(w[i]), abs(w[i - 1]))
        if w[i] - w[i - 1] <= gap_tol:
            group.append(i)
        else:
            clusters.append(group)
            group = [i]
    clusters.append(group)

    return EigenResult(
        values=w,
        vectors=v,
        residual_norms=residuals,
        iterations=iterations,
        clusters=clusters,
    )


def ground_state(op, tol=1e-8):
    """Smallest eigenvalue and unit eigenvector."""
    res = smallest_eigs(op, 1, tol=tol)
    return float(res.values[0]), res.vectors[:, 0]


def dense_oracle(op):
    """Full spectrum via a dense symmetric solve; the reference oracle.

    Capped at 4096 degrees of freedom.
    """
    matrix = _as_matrix(op)
    n = matrix.shape[0]
    if n > DENSE_CAP:
        raise CapacityError(f"dense oracle capped at {DENSE_CAP} dofs, got {n}")
    _check_symmetric(matrix)
    return la.eigvalsh(matrix.toarray())


def _enumerate_below(matrix, e_max, sigma):
    """All eigenvalues < e_max via shift-invert, or None past the cap.

    Doubles the requested count until the largest value found reaches
    e_max, which certifies that every eigenvalue below it is in hand.
    """
    n = matrix.shape[0]
    v0 = np.full(n, 1.0 / np.sqrt(n))
    csc = matrix.tocsc()
    k = 8
    while True:
        k_eff = min(k, n - 1)
        w = spla.eigsh(
            csc,
            k=k_eff,
            sigma=sigma,
            which="LM",
            v0=v0,
            maxiter=ITER_CAP,
            return_eigenvectors=False,
        )
        w = np.sort(w)
        if w[-1] >= e_max or k_eff == n - 1:
            return w[w < e_max]
        if k_eff >= _ENUM_CAP:
            return None
        k *= 2


def count_below_many(op, energies):
    """#\\{eigenvalues < E\\} for a sorted or unsorted battery of energies.

    Tridiagonal operators use the O(n) Sturm recursion per energy; small or
    narrow-banded operators are reduced directly; large ones enumerate the
    (few) eigenvalues below max(E) by shift-invert Lanczos, falling back to
    the exhaustive banded reduction past the enumeration cap.
    """
    matrix = _as_matrix(op)
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    e_max = float(np.max(energies))
    bw = _bandwidth(matrix)
    n = matrix.shape[0]
    if bw <= 1:
        return tridiag_count_below(
            matrix.diagonal(0), matrix.diagonal(1), energies
        )

    def _counts_from(sorted_vals):
        return np.searchsorted(sorted_vals, energies, side="left").astype(np.int64)

    if n <= _DENSE_PREF:
        return _counts_from(dense_oracle(matrix))
    lo, _ = gershgorin_bounds(matrix)
    if bw <= _BAND_CAP and float(n) * n * bw <= _BANDED_FLOP_CAP:
        found = la.eigvals_banded(
            _banded_lower(matrix, bw),
            lower=True,
            select="v",
            select_range=(lo - 1.0, e_max),
        )
        return _counts_from(found)
    found = _enumerate_below(matrix, e_max, _shift_sigma(op, matrix))
    if found is not None:
        return _counts_from(found)
    if bw <= _BAND_CAP:
        found = la.eigvals_banded(
            _banded_lower(matrix, bw),
            lower=True,
            select="v",
            select_range=(lo - 1.0, e_max),
        )
        return _counts_from(found)
    if n <= DENSE_CAP:
        return _counts_from(dense_oracle(matrix))
    raise CapacityError(
        f"count_below needs tridiagonal, banded (<= {_BAND_CAP}) or dense-sized input"
    )


def count_below(op, energy):
    """Number of eigenvalues strictly below one energy."""
    return int(count_below_many(op, [energy])[0])


def is_positive_definite_shifted(op, shift):
    """Whether A - shift I is positive definite (no eigenvalue below shift).

    Uses a banded Cholesky attempt when the profile allows: failure of the
    factorization certifies an eigenvalue below the shift, which is all the
    Lifshitz-tail counter needs.
    """
    matrix = _as_matrix(op)
    bw = _bandwidth(matrix)
    n = matrix.shape[0]
    if 0 < bw <= _BAND_CAP:
        ab = _banded_lower(matrix, bw)
        ab = ab.copy()
        ab[0] -= shift
        try:
            la.cholesky_banded(ab, lower=True)
            return True
        except la.LinAlgError:
            return False
    return count_below(op, shift) == 0
