"""Integrated density of states: free-chain oracle, tail fits, determinism."""

import numpy as np
import pytest

from rdm_lab import ids
from rdm_lab.errors import ConfigError, InconclusiveError
from rdm_lab.sites import DisplacementLaw, SingleSite, default_site


def test_zero_site_curve_matches_free_oracle_exactly():
    site = SingleSite(amplitude=0.0)
    law = DisplacementLaw(kind="box_uniform", d_max=site.d_max)
    extent, m = 40, 16
    e_grid = np.linspace(0.05, 8.0, 25)
    curve = ids.ids_curve(law, site, extent, e_grid, trials=2, seed=1, m=m)
    oracle = ids.free_ids_oracle(e_grid, extent, m)
    assert np.array_equal(curve.n_of_e, oracle)


def test_free_oracle_tracks_continuum_square_root():
    extent, m = 400, 32
    e_grid = np.linspace(0.2, 6.0, 12)
    oracle = ids.free_ids_oracle(e_grid, extent, m)
    continuum = np.sqrt(e_grid) / np.pi
    assert np.max(np.abs(oracle - continuum)) <= 2.0 / (2 * extent + 1) + 0.01


def test_curve_validation():
    with pytest.raises(ConfigError):
        ids.IdsCurve(
            e_grid=np.array([1.0, 1.0, 2.0]),
            n_of_e=np.array([0.0, 0.1, 0.2]),
            extent=1,
            trials=1,
            m=8,
            law="box_uniform",
            seed=0,
        )
    with pytest.raises(ConfigError):
        ids.IdsCurve(
            e_grid=np.array([1.0, 2.0, 3.0]),
            n_of_e=np.array([0.2, 0.1, 0.3]),
            extent=1,
            trials=1,
            m=8,
            law="box_uniform",
            seed=0,
        )


def test_synthetic_power_fit_recovers_parameters():
    e_grid = np.geomspace(1e-3, 0.45, 16)
    curve = ids.synthetic_curve(e_grid, 0.0, "power", c=0.3, beta=0.4)
    fit = ids.tail_fit(curve, 0.0)
    assert fit["preferred"] == "power"
    assert fit["beta"] == pytest.approx(0.4, rel=0.05)
    assert fit["c_pow"] == pytest.approx(0.3, rel=0.05)


def test_synthetic_log_fit_recovers_parameters():
    e_grid = np.geomspace(1e-3, 0.45, 16)
    curve = ids.synthetic_curve(e_grid, 0.0, "log", c=0.2)
    fit = ids.tail_fit(curve, 0.0)
    assert fit["preferred"] == "log"
    assert fit["c_log"] == pytest.approx(0.2, rel=0.05)


def test_synthetic_guards():
    with pytest.raises(ConfigError):
        ids.synthetic_curve(np.array([-0.1, 0.2]), 0.0, "power", c=1.0)
    with pytest.raises(ConfigError):
        ids.synthetic_curve(np.array([0.5, 1.5]), 0.0, "log", c=1.0)
    with pytest.raises(ConfigError):
        ids.synthetic_curve(np.array([0.1, 0.2]), 0.0, "cubic", c=1.0)


def test_tail_fit_needs_enough_points():
    e_grid = np.geomspace(1e-3, 0.45, 16)
    curve = ids.synthetic_curve(e_grid[:5], 0.0, "power", c=0.3)
    with pytest.raises(InconclusiveError):
        ids.tail_fit(curve, 0.0)


def test_default_grid_spans_amplitude_fractions():
    site = default_site()
    grid = ids.default_energy_grid(site, -3.0)
    assert grid.shape == (16,)
    assert np.isclose(grid[0], -3.0 + 1e-3 * 10.0)
    assert np.isclose(grid[-1], -3.0 + 0.5 * 10.0)


def test_ids_curve_deterministic_across_threads():
    site = default_site()
    law = DisplacementLaw(kind="corner_uniform", d_max=site.d_max)
    one = ids.ids_curve(law, site, 50, None, trials=3, seed=5, m=16, threads=1)
    many = ids.ids_curve(law, site, 50, None, trials=3, seed=5, m=16, threads=4)
    assert np.array_equal(one.n_of_e, many.n_of_e)
    assert np.all(np.diff(one.n_of_e) >= 0)


def test_binary_law_has_spectrum_near_bottom():
    # states appear within the first ladder rungs above the corner energy
    site = default_site()
    law = DisplacementLaw(kind="corner_uniform", d_max=site.d_max)
    curve = ids.ids_curve(law, site, 200, None, trials=2, seed=8, m=16)
    assert curve.n_of_e[-1] > 0.0
