"""Ground problems on multi-cell boxes, tubes, and period cells.

Everything here feeds on the same mechanism: with cell boundaries falling
between node layers, inserting Neumann interfaces never raises the discrete
ground energy, and mirror-image neighbours paste their cell ground states
into an exact global ground state.  Pasting equalities therefore hold to
roundoff, not merely to O(h^2).
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import _fd, eigen, grids
from .errors import ConfigError, RdmLabError
from .landscape import e0_of_a
from .sites import DisplacementConfig, minimizer_values, nonmatching_pairs

_REFERENCE_CACHE: dict = {}


def reference_ground_energy(site, m, d):
    """E_0(a*) at the all-plus corner of the displacement box, cached."""
    key = (site.key(), int(m), int(d))
    if key not in _REFERENCE_CACHE:
        a_star = np.full(d, site.d_max)
        _REFERENCE_CACHE[key] = float(e0_of_a(site, a_star, m))
    return _REFERENCE_CACHE[key]


@dataclasses.dataclass
class FaceNorm:
    """One-sided normal-derivative norms on the face between two cells."""

    cell_lo: tuple
    cell_hi: tuple
    axis: int
    norm_lo: float
    norm_hi: float

    @property
    def norm(self):
        return max(self.norm_lo, self.norm_hi)


@dataclasses.dataclass
class GroundReport:
    """Ground eigenpair of a multi-cell box with per-cell diagnostics.

    ``mass_fractions[idx]`` is the share of the squared ground state carried
    by the cell at index ``idx`` (relative to ``config.start``); the face
    norms quantify how far the state is from satisfying Neumann conditions
    on each internal cell boundary.
    """

    config: DisplacementConfig
    bc: str
    m: int
    e0: float
    mass_fractions: np.ndarray
    face_norms: list
    vector: np.ndarray | None = None

    def max_face_norm(self):
        if not self.face_norms:
            return 0.0
        return max(f.norm for f in self.face_norms)

    def to_dict(self):
        return {
            "bc": self.bc,
            "m": self.m,
            "e0": self.e0,
            "mass_fractions": self.mass_fractions.tolist(),
            "face_norms": [
                {
                    "cell_lo": list(f.cell_lo),
                    "cell_hi": list(f.cell_hi),
                    "axis": f.axis,
                    "norm_lo": f.norm_lo,
                    "norm_hi": f.norm_hi,
                }
                for f in self.face_norms
            ],
            "config": self.config.to_dict(),
        }


def _interleaved(grid, values):
    """Reshape a grid-shaped array to (cells[0], m, cells[1], m, ...)."""
    shape = []
    for c in grid.cells:
        shape.extend((c, grid.m))
    return values.reshape(shape)


def _cell_masses(grid, u):
    w = _interleaved(grid, u * u) * grid.h**grid.d
    return w.sum(axis=tuple(range(1, 2 * grid.d, 2)))


def _face_records(grid, u):
    """FaceNorm records for every internal cell boundary (non-periodic)."""
    h = grid.h
    d = grid.d
    out = []
    for axis in range(d):
        t_axes = [a for a in range(d) if a != axis]
        for k in range(1, grid.cells[axis]):
            layer = k * grid.m - 1
            lo, hi = _fd.interface_normal_derivative(u, axis, layer, h)
            # reduce transverse nodes to per-cell L2 norms
            norms = []
            for vals in (lo, hi):
                shape = []
                for a in t_axes:
                    shape.extend((grid.cells[a], grid.m))
                w = vals.reshape(shape) if t_axes else vals.reshape(())
                node_axes = tuple(range(1, 2 * len(t_axes), 2))
                s = (w * w).sum(axis=node_axes) if t_axes else w * w
                norms.append(np.sqrt(np.atleast_1d(s) * h ** (d - 1)))
            t_cells = [grid.cells[a] for a in t_axes]
            for flat, (nlo, nhi) in enumerate(zip(norms[0].ravel(), norms[1].ravel())):
                t_idx = np.unravel_index(flat, t_cells) if t_axes else ()
                cell_lo = [0] * d
                cell_lo[axis] = grid.start[axis] + k - 1
                for a, ti in zip(t_axes, t_idx):
                    cell_lo[a] = grid.start[a] + int(ti)
                cell_hi = list(cell_lo)
                cell_hi[axis] += 1
                out.append(
                    FaceNorm(
                        cell_lo=tuple(cell_lo),
                        cell_hi=tuple(cell_hi),
                        axis=axis,
                        norm_lo=float(nlo),
                        norm_hi=float(nhi),
                    )
                )
    return out


def box_ground(
    site,
    config,
    m,
    bc="neumann",
    extent=None,
    tol=1e-8,
    keep_vector=False,
    with_faces=True,
):
    """Ground eigenpair of -Delta + V_omega on a block of cells.

    With ``extent`` the operator lives on the centered box of half-extent
    ``extent`` (the configuration must cover it); otherwise the block of
    ``config`` itself is used.  Face norms are computed for non-periodic
    boundary conditions only.
    """
    if extent is not None:
        grid = grids.Grid.box(config.d, int(extent), m, bc=bc)
    else:
        grid = grids.Grid.block(config.cells, m, bc=bc, start=config.start)
    op = grids.assemble(grid, config, site)
    res = eigen.smallest_eigs(op, 1, tol=tol)
    e0 = float(res.values[0])
    u = res.vectors[:, 0].reshape(grid.shape) / grid.h ** (grid.d / 2.0)
    masses = _cell_masses(grid, u)
    total = float(masses.sum())
    if abs(total - 1.0) > 1e-10:
        raise RdmLabError(f"cell mass fractions sum to {total}, expected 1")
    faces = []
    if with_faces and bc != "periodic" and m >= 4:
        faces = _face_records(grid, u)
    return GroundReport(
        config=config,
        bc=bc,
        m=m,
        e0=e0,
        mass_fractions=masses,
        face_norms=faces,
        vector=u if keep_vector else None,
    )


def periodic_ground_energy(site, config, m, tol=1e-8):
    """Ground energy of the periodized operator on the config's own block."""
    grid = grids.Grid.block(config.cells, m, bc="periodic", start=config.start)
    op = grids.assemble(grid, config, site)
    return float(eigen.smallest_eigs(op, 1, tol=tol).values[0])


def corner_period_equality(site, m, d, tol=1e-8):
    """Compare E_0(a*) with the ground energy of the periodized 2-pattern.

    The alternating corner configuration is 2-periodic per axis; its period
    cell carries 2^d cells.  The periodized ground energy at quasimomentum
    zero must reproduce the single-cell corner energy exactly: mirror cells
    paste without penalty.
    """
    if d not in (1, 2, 3):
        raise ConfigError("d must be 1, 2, or 3")
    e0_corner = reference_ground_energy(site, m, d)
    start = (0,) * d
    cells = (2,) * d
    config = DisplacementConfig(
        start=start,
        values=minimizer_values(start, cells, site.d_max),
        d_max=site.d_max,
    )
    e0_period = periodic_ground_energy(site, config, m, tol=tol)
    return {
        "e0_corner_cell": e0_corner,
        "e0_period_cell": e0_period,
        "gap": e0_period - e0_corner,
    }


def enumerate_1d_periodic(site, l_period, m, tol=1e-6):
    """Brute-force table of periodic ground energies over all sign patterns.

    Every corner configuration on a 1d period of ``l_period`` cells is
    solved with periodic boundary conditions.  Patterns within ``tol`` of
    the table minimum form the minimizer set; for even periods it is
    compared against the balanced patterns (equally many cells displaced
    each way), and for odd periods the minimum is reported relative to the
    single-cell corner energy, which no odd pattern can attain.
    """
    l_period = int(l_period)
    if not (2 <= l_period <= 12):
        raise ConfigError("period length must lie in [2, 12]")
    d_max = site.d_max
    n_patterns = 1 << l_period
    energies = np.empty(n_patterns)
    for bits in range(n_patterns):
        signs = np.array([1.0 if bits >> n & 1 else -1.0 for n in range(l_period)])
        config = DisplacementConfig(
            start=(0,), values=(signs * d_max)[:, None], d_max=d_max
        )
        energies[bits] = periodic_ground_energy(site, config, m)
    e_min = float(energies.min())
    minimizers = set(np.flatnonzero(energies <= e_min + tol).tolist())
    balanced = {
        bits for bits in range(n_patterns) if 2 * bits.bit_count() == l_period
    }
    e_ref = reference_ground_energy(site, m, 1)
    out = {
        "l_period": l_period,
        "m": m,
        "tol": tol,
        "energies": energies,
        "e_min": e_min,
        "e_reference": e_ref,
        "minimizers": minimizers,
        "balanced": balanced,
        "even": l_period % 2 == 0,
    }
    if l_period % 2 == 0:
        out["sets_equal"] = minimizers == balanced
        others = [energies[b] for b in range(n_patterns) if b not in balanced]
        out["margin"] = float(min(others) - e_min) if others else np.inf
    else:
        out["sets_equal"] = None
        out["margin"] = float(e_min - e_ref)
    return out


def tube_config(site, extent, matched=False):
    """Corner configuration on a (2L+1) x 1 tube of cells.

    The chain alternates axially so that cells -L and -L+1 cluster their
    bubbles at the shared face.  With ``matched`` false the transverse
    component of cell -L is flipped, leaving the bubbles face-to-face but
    diagonally offset: the pair (-L, -L+1) becomes the single non-matching
    pair, and of the possible corner breaks this one carries the strongest
    interface defect (shortest crossover to the 1/L^2 regime).
    """
    d_max = site.d_max
    start = (-extent, 0)
    n_cells = 2 * extent + 1
    values = np.empty((n_cells, 1, 2))
    values[:, 0, 1] = d_max
    # axial signs: cell -L+1 points at the face it shares with cell -L
    for i in range(1, n_cells):
        values[i, 0, 0] = -d_max if (i - 1) % 2 == 0 else d_max
    values[0, 0, 0] = d_max
    if not matched:
        values[0, 0, 1] = -d_max
    return DisplacementConfig(start=start, values=values, d_max=d_max)


def tube_gap(site, extents, m, matched=False, tol=1e-8):
    """Ground-energy excess of tube operators over the corner energy.

    For each half-extent L the Neumann problem on the (2L+1) x 1 tube of
    cells is solved and gap(L) = e0(tube) - E_0(a*) reported, together with
    the scaled values gap * L^2 and their spread.
    """
    extents = [int(extents)] if np.isscalar(extents) else [int(x) for x in extents]
    e_ref = reference_ground_energy(site, m, 2)
    gaps = []
    n_bad = []
    for ell in extents:
        config = tube_config(site, ell, matched=matched)
        n_bad.append(len(nonmatching_pairs(config)))
        grid = grids.Grid.tube(ell, m, bc="neumann")
        op = grids.assemble(grid, config, site)
        e0 = float(eigen.smallest_eigs(op, 1, tol=tol).values[0])
        gaps.append(e0 - e_ref)
    gaps = np.array(gaps)
    c_values = gaps * np.array(extents, dtype=float) ** 2
    positive = c_values[c_values > 0]
    c_fit = float(np.exp(np.mean(np.log(positive)))) if positive.size else 0.0
    spread = (
        float(positive.max() / positive.min())
        if positive.size == len(extents) and positive.size > 0
        else np.inf
    )
    return {
        "extents": extents,
        "m": m,
        "matched": matched,
        "nonmatching_pairs": n_bad,
        "e_reference": e_ref,
        "gaps": gaps,
        "c_values": c_values,
        "c_fit": c_fit,
        "spread": spread,
    }


def bracketing_check(site, config, m, extent=None, tol=1e-8):
    """Residual of the per-cell Neumann lower bound for the box ground energy.

    residual = min_n E_0(omega_n) - e0(box); inserting Neumann interfaces
    only lowers the discrete energy, so the residual must stay below the
    interface allowance 5 h ||q||_inf (in practice it is <= 0 to roundoff).
    """
    report = box_ground(
        site, config, m, bc="neumann", extent=extent, tol=tol, with_faces=False
    )
    if extent is not None:
        d = config.d
        lo = [-int(extent)] * d
        counts = [2 * int(extent) + 1] * d
    else:
        lo = list(config.start)
        counts = list(config.cells)
    cell_e0 = []
    for idx in np.ndindex(*counts):
        cell = tuple(lo[a] + idx[a] for a in range(len(counts)))
        cell_e0.append(e0_of_a(site, config.omega(cell), m, tol=tol))
    residual = float(min(cell_e0) - report.e0)
    bound = 5.0 * (1.0 / m) * site.q_inf(config.d)
    if residual > bound:
        raise RdmLabError(
            f"bracketing residual {residual:.3e} exceeds allowance {bound:.3e}"
        )
    return {
        "e0_box": report.e0,
        "min_cell_e0": float(min(cell_e0)),
        "residual": residual,
        "bound": bound,
    }


def cell_neumann_residual(site, config, m, extent=None, tol=1e-8):
    """Per-face normal-derivative norms of the box ground state.

    For an all-matching corner configuration the ground state pastes from
    reflected cell ground states and satisfies the cell-wise Neumann
    conditions, so every one-sided face norm must stay below 10 h; for
    configurations with non-matching pairs the norms are only reported.
    """
    pairs = nonmatching_pairs(config)
    report = box_ground(
        site, config, m, bc="neumann", extent=extent, tol=tol, with_faces=True
    )
    max_norm = report.max_face_norm()
    bound = 10.0 * (1.0 / m)
    matched = len(pairs) == 0
    if matched and max_norm > bound:
        raise RdmLabError(
            f"matched config face norm {max_norm:.3e} exceeds {bound:.3e}"
        )
    return {
        "matched": matched,
        "nonmatching_pairs": pairs,
        "face_norms": report.face_norms,
        "max_face_norm": max_norm,
        "bound": bound,
        "e0": report.e0,
    }


def uniqueness_probe_2d(site, m, tol=1e-8):
    """Exhaustive 2x2-periodic corner probe for the minimizer's rigidity.

    All 256 corner configurations on the 2x2 period cell are periodized and
    solved; the four all-matching sign choices must reproduce E_0(a*), and
    every configuration with a non-matching pair must exceed it by a
    strictly positive margin delta (recorded, site-dependent).
    """
    d_max = site.d_max
    e_ref = reference_ground_energy(site, m, 2)
    corners = np.array([(d_max, d_max), (d_max, -d_max), (-d_max, d_max), (-d_max, -d_max)])
    matched_dev = 0.0
    n_matched = 0
    worst = None
    delta = np.inf
    for pick in np.ndindex(4, 4, 4, 4):
        values = corners[list(pick)].reshape(2, 2, 2)
        config = DisplacementConfig(start=(0, 0), values=values, d_max=d_max)
        bad = nonmatching_pairs(config, periodic=True)
        e0 = periodic_ground_energy(site, config, m, tol=tol)
        if bad:
            if e0 - e_ref < delta:
                delta = e0 - e_ref
                worst = values.copy()
        else:
            n_matched += 1
            matched_dev = max(matched_dev, abs(e0 - e_ref))
    return {
        "m": m,
        "e_reference": e_ref,
        "n_matched": n_matched,
        "matched_deviation": matched_dev,
        "delta": float(delta),
        "tightest_config": worst,
    }
