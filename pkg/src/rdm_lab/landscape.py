"""Single-cell ground-energy landscape over the displacement box.

E_0(a) is the lowest Neumann eigenvalue of -Delta + q(. - a) on the unit
cell.  The scan classifies the landscape (corner-minimized, flat, other),
gradients come from finite differences or the eigenvalue-derivative formula,
and the second-derivative identity ties the curvature of E_0 to a boundary
form of the eigenfunctions.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import _fd, eigen
from .errors import ConfigError
from .grids import Grid, assemble, build_laplacian
from .sites import DisplacementConfig

_MONO_TOL = 1e-10
_FLAT_FACTOR = 100.0  # flat when max-min <= 100 h^2 ||q||_inf


def single_cell_operator(site, a, m, bc="neumann"):
    """-Delta + q(. - a) on the unit cell around the origin."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    d = a.shape[0]
    if np.max(np.abs(a)) > site.d_max * (1 + 1e-12):
        raise ConfigError("displacement outside the admissible box")
    grid = Grid.box(d, 0, m, bc)
    config = DisplacementConfig(
        start=(0,) * d, values=a.reshape((1,) * d + (d,)), d_max=site.d_max
    )
    return assemble(grid, config, site)


def e0_of_a(site, a, m, tol=1e-8, with_vector=False):
    """Ground energy of the displaced single-cell Neumann problem.

    With ``with_vector`` the unit eigenvector (grid-shaped) is returned too.
    """
    op = single_cell_operator(site, a, m)
    res = eigen.smallest_eigs(op, 1, tol=tol)
    e0 = float(res.values[0])
    if not with_vector:
        return e0
    d = len(np.atleast_1d(a))
    return e0, res.vectors[:, 0].reshape((m,) * d)


@dataclasses.dataclass
class LandscapeTable:
    """Tensor-grid scan of E_0 over displacements.

    ``axes`` is the shared per-axis coordinate vector (symmetric about 0);
    ``e0`` has shape (res,) * d; ``grad`` optionally stacks the gradient in
    a trailing axis.
    """

    site: dict
    d: int
    m: int
    axes: np.ndarray
    e0: np.ndarray
    grad: np.ndarray | None
    monotonicity_violations: int
    classification: str

    def point(self, idx):
        return np.array([self.axes[i] for i in idx])

    def argmin(self):
        return tuple(np.unravel_index(int(np.argmin(self.e0)), self.e0.shape))

    def argmax(self):
        return tuple(np.unravel_index(int(np.argmax(self.e0)), self.e0.shape))

    def corner_indices(self):
        last = len(self.axes) - 1
        out = []
        for bits in np.ndindex(*(2,) * self.d):
            out.append(tuple(last if b else 0 for b in bits))
        return out


def _symmetric_axis(d_max, res):
    axis = np.linspace(-d_max, d_max, res)
    return (axis - axis[::-1]) / 2.0  # exactly odd-symmetric grid


def _count_monotonicity_violations(e0, axes):
    """Increases of E_0 while |a_j| grows along any grid line."""
    d = e0.ndim
    center = int(np.argmin(np.abs(axes)))
    bad = 0
    for axis in range(d):
        w = np.moveaxis(e0, axis, 0)
        # outward from the center in both directions
        up = w[center:]
        down = w[center::-1]
        for run in (up, down):
            diffs = np.diff(run, axis=0)
            bad += int(np.sum(diffs > _MONO_TOL))
    return bad


def scan_landscape(site, grid_res, m, d, with_grad=False, tol=1e-8):
    """Evaluate E_0 on a symmetric tensor grid over the displacement box.

    The grid is exactly reflection-symmetric, so landscape symmetries are
    inherited up to solver noise rather than grid placement.
    """
    axes = _symmetric_axis(site.d_max, grid_res)
    shape = (grid_res,) * d
    e0 = np.empty(shape)
    grad = np.empty(shape + (d,)) if with_grad else None
    for idx in np.ndindex(*shape):
        a = np.array([axes[i] for i in idx])
        op = single_cell_operator(site, a, m)
        res = eigen.smallest_eigs(op, 1, tol=tol)
        e0[idx] = res.values[0]
        if with_grad:
            grad[idx] = _hf_gradient(site, a, m, res.vectors[:, 0])
    violations = _count_monotonicity_violations(e0, axes)
    spread = float(np.max(e0) - np.min(e0))
    flat_cut = _FLAT_FACTOR * (1.0 / m) ** 2 * site.q_inf(d)
    if spread <= flat_cut:
        classification = "flat"
    else:
        corner_idx = []
        last = grid_res - 1
        for bits in np.ndindex(*(2,) * d):
            corner_idx.append(tuple(last if b else 0 for b in bits))
        amin = tuple(np.unravel_index(int(np.argmin(e0)), shape))
        classification = (
            "corner-minimized" if amin in corner_idx and violations == 0 else "other"
        )
    return LandscapeTable(
        site=site.to_dict(),
        d=d,
        m=m,
        axes=axes,
        e0=e0,
        grad=grad,
        monotonicity_violations=violations,
        classification=classification,
    )


def _hf_gradient(site, a, m, u):
    """Eigenvalue derivative via the ground state: dE/da_i = -<u, d_i q u>."""
    grid = Grid.box(len(a), 0, m, "neumann")
    x = grid.node_coords() - np.asarray(a)
    gq = site.grad_q(x)
    u2 = u * u
    return -np.array([float(np.sum(u2 * gq[:, i])) for i in range(len(a))])


def grad_e0(site, a, m, method="hf", tol=1e-8, delta_frac=256.0):
    """Gradient of E_0 at a, by eigenvalue perturbation or central differences.

    The finite-difference step is d_max/delta_frac; the displaced stencil
    points must stay inside the box, so ``fd`` needs an interior point.  The
    default step keeps the fourth-order truncation error of the stencil well
    below the 1e-3 agreement checked against the perturbation gradient.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if method == "hf":
        op = single_cell_operator(site, a, m)
        res = eigen.smallest_eigs(op, 1, tol=tol)
        return _hf_gradient(site, a, m, res.vectors[:, 0])
    if method != "fd":
        raise ValueError("method must be 'hf' or 'fd'")
    delta = site.d_max / delta_frac
    if np.max(np.abs(a)) + 2 * delta > site.d_max * (1 + 1e-12):
        raise ConfigError("fd stencil leaves the displacement box")
    out = np.empty(len(a))
    for i in range(len(a)):
        es = []
        for j in (-2, -1, 1, 2):
            aj = a.copy()
            aj[i] += j * delta
            es.append(e0_of_a(site, aj, m, tol))
        out[i] = (es[0] - 8 * es[1] + 8 * es[2] - es[3]) / (12 * delta)
    return out


def _e0_derivatives_in_a1(site, a, m, tol):
    """(E0', E0'') in the first coordinate by 5-point stencils.

    The step equals the grid spacing: sampling the potential on a shifted
    lattice gives E_0(a) a tiny h-periodic ripple whose curvature would
    otherwise swamp E_0''; at step h the ripple is identical at every
    stencil point and drops out of both differences.
    """
    delta = 1.0 / m
    if abs(a[0]) + 2 * delta > site.d_max * (1 + 1e-12):
        raise ConfigError("second-derivative stencil leaves the displacement box")
    es = []
    for j in (-2, -1, 0, 1, 2):
        aj = a.copy()
        aj[0] += j * delta
        es.append(e0_of_a(site, aj, m, tol))
    e0p = (es[0] - 8 * es[1] + 8 * es[3] - es[4]) / (12 * delta)
    e0pp = (-es[0] + 16 * es[1] - 30 * es[2] + 16 * es[3] - es[4]) / (
        12 * delta * delta
    )
    return e0p, e0pp, es[2]


def _perturbation_pieces(site, a, m, k_max, tol):
    """Shared spectral data: L2-normalized eigenfunctions, ip, B terms."""
    d = len(a)
    h = 1.0 / m
    op = single_cell_operator(site, a, m)
    res = eigen.smallest_eigs(op, k_max + 1, tol=tol)
    scale = h ** (d / 2.0)
    shape = (m,) * d
    funcs = [res.vectors[:, k].reshape(shape) / scale for k in range(k_max + 1)]
    u0 = funcs[0]
    du0 = _fd.axis_derivative(u0, 0, h)
    ip = float(np.sum(u0 * du0)) * h**d
    b_terms = np.array(
        [_fd.boundary_form(funcs[k], du0, h) for k in range(1, k_max + 1)]
    )
    gaps = res.values[1:] - res.values[0]
    return res, ip, b_terms, gaps


def _tail_estimate(b_terms, gaps, e_values, k_max):
    """Continuation of sum B_k^2/(E_k - E_0) past the computed terms.

    B_k^2 settles to parity-dependent plateaus, so the last term of each
    parity is extended along the free-spectrum growth E_k ~ pi^2 k^2 + c.
    """
    b2 = b_terms**2
    b2_last = {k_max % 2: b2[k_max - 1], (k_max - 1) % 2: b2[k_max - 2]}
    c_shift = float(e_values[k_max] - np.pi**2 * k_max**2)
    ks = np.arange(k_max + 1, 100_000)
    gaps_est = np.pi**2 * ks**2 + c_shift - float(e_values[0])
    b2_est = np.where(ks % 2 == k_max % 2, b2_last[k_max % 2], b2_last[(k_max - 1) % 2])
    return float(np.sum(b2_est / gaps_est))


def perturbation_identity(
    site, a1, fixed_transverse=(), m=128, k_max=12, tol=1e-8
):
    """Check E0'' - 4 E0' <u0, d1 u0> = -2 sum_k B(u_k, d1 u0)^2 / (E_k - E0).

    Both sides are reported together with the relative error of the
    tail-corrected right side and the raw truncation tail estimate.
    """
    a = np.array([a1, *fixed_transverse], dtype=float)
    res, ip, b_terms, gaps = _perturbation_pieces(site, a, m, k_max, tol)
    e0p, e0pp, _ = _e0_derivatives_in_a1(site, a, m, tol)
    lhs = e0pp - 4.0 * e0p * ip
    partial = float(np.sum(b_terms**2 / gaps))
    tail = _tail_estimate(b_terms, gaps, res.values, k_max)
    rhs = -2.0 * (partial + tail)
    rel_err = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    return {
        "a": a.tolist(),
        "m": m,
        "k_max": k_max,
        "lhs": lhs,
        "rhs": rhs,
        "rhs_truncated": -2.0 * partial,
        "tail": -2.0 * tail,
        "ip": ip,
        "e0_prime": e0p,
        "e0_second": e0pp,
        "rel_err": rel_err,
    }


def monotone_integral(site, a1_grid, m, k_max=12, tol=1e-8):
    """Reconstruct E0'(a1) from the integrating-factor identity.

    With F' = -4 <u0, d1 u0>, (e^F E0')' = -2 e^F S where S is the boundary
    spectral sum, so E0' = -2 e^{-F} int_0^{a1} e^F S.  The reconstruction is
    compared against direct finite differences of E0.
    """
    a1_grid = np.asarray(a1_grid, dtype=float)
    if a1_grid.ndim != 1 or np.any(np.diff(a1_grid) <= 0):
        raise ValueError("a1_grid must be strictly increasing")
    ips = np.empty(a1_grid.size)
    s_sum = np.empty(a1_grid.size)
    e0p_fd = np.empty(a1_grid.size)
    for i, a1 in enumerate(a1_grid):
        a = np.array([a1])
        res, ip, b_terms, gaps = _perturbation_pieces(site, a, m, k_max, tol)
        tail = _tail_estimate(b_terms, gaps, res.values, k_max)
        ips[i] = ip
        s_sum[i] = float(np.sum(b_terms**2 / gaps)) + tail
        e0p_fd[i], _, _ = _e0_derivatives_in_a1(site, a, m, tol)

    # integrate outward from a1 = 0
    i0 = int(np.argmin(np.abs(a1_grid)))
    f_grid = np.empty_like(a1_grid)
    f_grid[i0:] = cumulative_trapezoid(-4 * ips[i0:], a1_grid[i0:], initial=0.0)
    f_grid[: i0 + 1] = cumulative_trapezoid(
        -4 * ips[i0::-1], a1_grid[i0::-1], initial=0.0
    )[::-1]
    ef = np.exp(f_grid)
    integ = np.empty_like(a1_grid)
    integ[i0:] = cumulative_trapezoid(ef[i0:] * s_sum[i0:], a1_grid[i0:], initial=0.0)
    integ[: i0 + 1] = cumulative_trapezoid(
        ef[i0::-1] * s_sum[i0::-1], a1_grid[i0::-1], initial=0.0
    )[::-1]
    e0p_rec = -2.0 * integ / ef
    denom = np.linalg.norm(e0p_fd)
    mismatch = float(np.linalg.norm(e0p_rec - e0p_fd) / denom) if denom > 0 else 0.0
    return {
        "a1_grid": a1_grid,
        "e0_prime_fd": e0p_fd,
        "e0_prime_reconstructed": e0p_rec,
        "l2_mismatch": mismatch,
    }


def coupling_curvature(site, a, m, bc="neumann", k_max=12, tol=1e-8):
    """First/second-order coupling of the free ground state to q(. - a).

    first_order = <phi0, q phi0>; second_order = -2 sum_k <phi0, q phi_k>^2
    / (E_k - E_0), both on the free operator with the requested boundary
    condition.  For Neumann the first-order term cannot depend on a (the
    free ground state is flat); for Dirichlet it can, and its sign pattern
    tracks the sign of q.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    d = a.shape[0]
    grid = Grid.box(d, 0, m, bc)
    op = build_laplacian(grid)
    res = eigen.smallest_eigs(op, k_max + 1, tol=tol)
    qv = site.q(grid.node_coords() - a)
    phi0 = res.vectors[:, 0]
    first = float(np.sum(phi0 * qv * phi0))
    second = 0.0
    for k in range(1, k_max + 1):
        cross = float(np.sum(phi0 * qv * res.vectors[:, k]))
        second -= 2.0 * cross * cross / float(res.values[k] - res.values[0])
    return {"a": a.tolist(), "first_order": first, "second_order": second}
