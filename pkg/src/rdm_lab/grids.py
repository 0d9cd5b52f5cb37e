"""Cell-centered finite-difference grids and -Delta + V operators.

Boxes are unions of closed unit cells centered at integer lattice points.
Each cell carries m nodes per axis, spacing h = 1/m, placed at cell-centered
positions so that every cell boundary falls midway between two node layers.
That alignment is what makes Neumann bracketing exact at the discrete level:
dropping the inter-cell coupling rows reproduces the per-cell Neumann
stencils without any interface correction.

Boundary treatment per axis:

* neumann   - ghost node mirrors the first interior node, so the boundary
              row loses one off-diagonal neighbor and its diagonal drops to
              1/h^2 (degree deficit).
* dirichlet - ghost node anti-mirrors it (u_ghost = -u_0), pinning u = 0 on
              the physical boundary half a spacing outside the node; the
              boundary diagonal becomes 3/h^2.  This keeps the eigenvalue
              error at O(h^2); the naive fixed-degree stencil is only O(h).
* periodic  - wrap-around coupling, constant diagonal 2/h^2.
"""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError, ConfigError, ResolutionError

NNZ_CAP_DEFAULT = 20_000_000

_BCS = ("neumann", "dirichlet", "periodic")


@dataclasses.dataclass(frozen=True)
class Grid:
    """A block of unit cells with a cell-centered tensor grid.

    Cells along axis a run from start[a] to start[a] + cells[a] - 1; node i
    of that axis sits at x = start[a] - 1/2 + (i + 1/2) h.
    """

    d: int
    m: int
    bc: str
    cells: tuple
    start: tuple

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ResolutionError(f"dimension {self.d} unsupported")
        if self.m < 4:
            raise ResolutionError(f"resolution m={self.m} below minimum 4")
        if self.bc not in _BCS:
            raise ResolutionError(f"unknown boundary condition {self.bc!r}")
        if len(self.cells) != self.d or len(self.start) != self.d:
            raise ResolutionError("cells/start arity must match dimension")
        if any(c < 1 for c in self.cells):
            raise ResolutionError("each axis needs at least one cell")

    @classmethod
    def box(cls, d, L, m, bc="neumann"):
        """Centered cube of side 2L+1 cells: the box (-L-1/2, L+1/2)^d."""
        if L < 0:
            raise ResolutionError("half-extent L must be >= 0")
        return cls(d=d, m=m, bc=bc, cells=(2 * L + 1,) * d, start=(-L,) * d)

    @classmethod
    def tube(cls, L, m, bc="neumann"):
        """d=2 tube of 2L+1 cells along axis 0, one cell across."""
        return cls(d=2, m=m, bc=bc, cells=(2 * L + 1, 1), start=(-L, 0))

    @classmethod
    def block(cls, cells, m, bc="periodic", start=None):
        """General block; default start at the origin cell."""
        cells = tuple(int(c) for c in cells)
        if start is None:
            start = (0,) * len(cells)
        return cls(d=len(cells), m=m, bc=bc, cells=cells, start=tuple(start))

    @property
    def h(self):
        return 1.0 / self.m

    @property
    def shape(self):
        """Nodes per axis."""
        return tuple(c * self.m for c in self.cells)

    @property
    def n_dofs(self):
        return int(np.prod(self.shape))

    def axis_coords(self, a):
        """Node coordinates along axis a."""
        n = self.cells[a] * self.m
        i = np.arange(n)
        return self.start[a] - 0.5 + (i + 0.5) * self.h

    def axis_cells(self, a):
        """Integer cell index of each node along axis a."""
        return self.start[a] + np.arange(self.cells[a] * self.m) // self.m

    def node_coords(self):
        """Flat (n_dofs, d) array of node positions, C-ordered."""
        axes = [self.axis_coords(a) for a in range(self.d)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([mm.ravel() for mm in mesh], axis=-1)


@dataclasses.dataclass
class DiscreteOperator:
    """Sparse symmetric representation of -Delta + V on a grid."""

    grid: Grid
    matrix: sp.csr_matrix
    potential_values: np.ndarray

    @property
    def n_dofs(self):
        return self.matrix.shape[0]

    def tridiagonal(self):
        """(diag, off) arrays when the operator is 1d non-periodic, else None."""
        if self.grid.d != 1 or self.grid.bc == "periodic":
            return None
        return self.matrix.diagonal(0), self.matrix.diagonal(1)

    def bandwidth(self):
        """Max |i - j| over stored entries; n/shape[0] for our C-ordering."""
        coo = self.matrix.tocoo()
        if coo.nnz == 0:
            return 0
        return int(np.max(np.abs(coo.row - coo.col)))

    def banded_lower(self):
        """LAPACK lower-banded storage (bw+1, n)."""
        bw = self.bandwidth()
        n = self.n_dofs
        ab = np.zeros((bw + 1, n))
        for k in range(bw + 1):
            diag = self.matrix.diagonal(-k)
            ab[k, : n - k] = diag
        return ab

    def to_dense(self):
        return self.matrix.toarray()


def _lap1d(n, h, bc):
    inv_h2 = 1.0 / (h * h)
    diag = np.full(n, 2.0 * inv_h2)
    if bc == "neumann":
        diag[0] = inv_h2
        diag[-1] = inv_h2
    elif bc == "dirichlet":
        diag[0] = 3.0 * inv_h2
        diag[-1] = 3.0 * inv_h2
    off = np.full(n - 1, -inv_h2)
    mat = sp.diags([off, diag, off], [-1, 0, 1], format="lil")
    if bc == "periodic":
        mat[0, n - 1] += -inv_h2
        mat[n - 1, 0] += -inv_h2
    return mat.tocsr()


def build_laplacian(grid, nnz_cap=None):
    """Discrete -Delta on the grid as a DiscreteOperator with V = 0."""
    cap = NNZ_CAP_DEFAULT if nnz_cap is None else nnz_cap
    est = grid.n_dofs * (2 * grid.d + 1)
    if est > cap:
        raise CapacityError(
            f"estimated {est} nonzeros exceeds cap {cap} "
            f"(n_dofs={grid.n_dofs}, d={grid.d})"
        )
    shape = grid.shape
    blocks = [_lap1d(shape[a], grid.h, grid.bc) for a in range(grid.d)]
    total = None
    for a in range(grid.d):
        pre = int(np.prod(shape[:a], dtype=np.int64)) if a > 0 else 1
        post = int(np.prod(shape[a + 1:], dtype=np.int64)) if a + 1 < grid.d else 1
        term = sp.kron(sp.identity(pre, format="csr"), blocks[a], format="csr")
        term = sp.kron(term, sp.identity(post, format="csr"), format="csr")
        total = term if total is None else total + term
    total = total.tocsr()
    total.sort_indices()
    return DiscreteOperator(
        grid=grid,
        matrix=total,
        potential_values=np.zeros(grid.n_dofs),
    )


def potential_on_grid(grid, config, site):
    """Sample sum_n q(x - n - omega_n) at every node, C-ordered flat array.

    Site supports stay inside their own cell (r < 1/4, |omega| <= 1/2 - r),
    so each node sees only the term of the cell containing it.
    """
    _check_config(grid, config, site)
    xi_axes = []
    cell_axes = []
    for a in range(grid.d):
        x = grid.axis_coords(a)
        c = grid.axis_cells(a)
        xi_axes.append(x - c)
        cell_axes.append(c - config.start[a])
    xi_mesh = np.meshgrid(*xi_axes, indexing="ij")
    idx_mesh = np.meshgrid(*cell_axes, indexing="ij")
    omega = config.values[tuple(idx_mesh)]
    args = np.stack(xi_mesh, axis=-1) - omega
    return site.q(args).ravel()


def assemble(grid, config, site, nnz_cap=None):
    """DiscreteOperator for -Delta + sum_n q(. - n - omega_n) on the grid."""
    op = build_laplacian(grid, nnz_cap=nnz_cap)
    v = potential_on_grid(grid, config, site)
    matrix = (op.matrix + sp.diags(v)).tocsr()
    matrix.sort_indices()
    return DiscreteOperator(grid=grid, matrix=matrix, potential_values=v)


def _check_config(grid, config, site):
    if config.values.shape[-1] != grid.d:
        raise ConfigError("configuration dimension does not match the grid")
    for a in range(grid.d):
        lo_ok = config.start[a] <= grid.start[a]
        hi_ok = (
            config.start[a] + config.values.shape[a]
            >= grid.start[a] + grid.cells[a]
        )
        if not (lo_ok and hi_ok):
            raise ConfigError(
                f"configuration does not cover grid cells along axis {a}"
            )
    d_max = site.d_max
    if np.max(np.abs(config.values)) > d_max * (1.0 + 1e-12) + 1e-15:
        raise ConfigError("displacement outside the admissible closed box")
