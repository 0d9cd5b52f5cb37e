"""Grid construction and operator assembly against closed-form spectra.

The cell-centered Laplacian has exact eigenvalues for all three boundary
conditions in 1d; those closed forms are the oracles here, and tensor sums
extend them to a 2d cross-check.
"""

import numpy as np
import pytest

from rdm_lab import eigen, grids
from rdm_lab.errors import ConfigError, ResolutionError
from rdm_lab.sites import DisplacementConfig, SingleSite, default_site


def _free_1d(n, h, bc):
    """Eigenvalues of the 1d cell-centered Laplacian on n nodes."""
    if bc == "neumann":
        k = np.arange(n)
        return (4.0 / h**2) * np.sin(np.pi * k / (2 * n)) ** 2
    if bc == "dirichlet":
        k = np.arange(1, n + 1)
        return (4.0 / h**2) * np.sin(np.pi * k / (2 * n)) ** 2
    k = np.arange(n)
    return (4.0 / h**2) * np.sin(np.pi * k / n) ** 2


@pytest.mark.parametrize("bc", ["neumann", "dirichlet", "periodic"])
def test_free_laplacian_1d_spectrum_exact(bc):
    grid = grids.Grid.box(1, 1, 8, bc=bc)
    op = grids.build_laplacian(grid)
    got = eigen.dense_oracle(op)
    want = np.sort(_free_1d(grid.n_dofs, grid.h, bc))
    assert np.allclose(got, want, atol=1e-9, rtol=0)


def test_free_laplacian_2d_tensor_sum():
    grid = grids.Grid.box(2, 0, 6, bc="neumann")
    op = grids.build_laplacian(grid)
    got = eigen.dense_oracle(op)
    lam1 = _free_1d(6, grid.h, "neumann")
    want = np.sort((lam1[:, None] + lam1[None, :]).ravel())
    assert np.allclose(got, want, atol=1e-9, rtol=0)


def test_node_coords_cell_centered():
    grid = grids.Grid.box(1, 1, 4, bc="neumann")
    x = grid.node_coords()[:, 0]
    assert x.shape == (12,)
    assert np.allclose(np.diff(x), grid.h)
    assert np.isclose(x[0], -1.5 + grid.h / 2.0)
    assert np.isclose(x.sum(), 0.0, atol=1e-12)


def test_grid_shapes_and_block():
    box = grids.Grid.box(2, 1, 4)
    assert box.shape == (12, 12)
    tube = grids.Grid.tube(2, 4)
    assert tube.shape == (20, 4)
    block = grids.Grid.block((2, 3), 4, bc="periodic", start=(0, -1))
    assert block.shape == (8, 12)
    assert block.start == (0, -1)


def test_resolution_floor():
    with pytest.raises(ResolutionError):
        grids.Grid.box(1, 0, 2)


def test_potential_zero_amplitude_site():
    grid = grids.Grid.box(1, 1, 8)
    site = SingleSite(amplitude=0.0)
    config = DisplacementConfig(
        start=(-1,), values=np.zeros((3, 1)), d_max=site.d_max
    )
    v = grids.potential_on_grid(grid, config, site)
    assert np.all(v == 0.0)


def test_potential_rejects_undersized_config():
    grid = grids.Grid.box(1, 1, 8)
    site = default_site()
    config = DisplacementConfig(
        start=(0,), values=np.zeros((1, 1)), d_max=site.d_max
    )
    with pytest.raises(ConfigError):
        grids.potential_on_grid(grid, config, site)


def test_assemble_is_laplacian_plus_potential():
    grid = grids.Grid.box(1, 1, 8)
    site = default_site()
    config = DisplacementConfig(
        start=(-1,),
        values=np.array([[0.1], [-0.2], [0.3]]),
        d_max=site.d_max,
    )
    op = grids.assemble(grid, config, site)
    lap = grids.build_laplacian(grid)
    v = grids.potential_on_grid(grid, config, site)
    diff = op.to_dense() - lap.to_dense() - np.diag(v)
    assert np.max(np.abs(diff)) < 1e-12


def test_potential_translation_covariance():
    # displacing the bump by one grid step permutes the sampled values
    site = default_site()
    m = 10
    h = 1.0 / m
    grid = grids.Grid.box(1, 0, m)
    base = DisplacementConfig(start=(0,), values=np.array([[0.0]]), d_max=site.d_max)
    shft = DisplacementConfig(start=(0,), values=np.array([[h]]), d_max=site.d_max)
    v0 = grids.potential_on_grid(grid, base, site)
    v1 = grids.potential_on_grid(grid, shft, site)
    assert np.allclose(v1[1:], v0[:-1], atol=1e-12)
