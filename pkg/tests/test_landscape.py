"""Single-cell energy landscape: symmetry, gradients, classification."""

import numpy as np
import pytest

from rdm_lab import landscape as lsc
from rdm_lab.errors import ConfigError
from rdm_lab.sites import default_site, make_alt2_site


def test_e0_reflection_symmetry():
    site = default_site()
    for a in (0.1, 0.22, 0.3):
        lo = lsc.e0_of_a(site, [-a], 32)
        hi = lsc.e0_of_a(site, [a], 32)
        assert np.isclose(lo, hi, atol=1e-9)


def test_e0_axis_exchange_symmetry_2d():
    site = default_site()
    e_ab = lsc.e0_of_a(site, [0.1, 0.25], 12)
    e_ba = lsc.e0_of_a(site, [0.25, 0.1], 12)
    assert np.isclose(e_ab, e_ba, atol=1e-9)


def test_displacement_box_enforced():
    site = default_site()
    with pytest.raises(ConfigError):
        lsc.e0_of_a(site, [0.31], 16)


def test_gradient_methods_agree_interior():
    site = default_site()
    a = np.array([0.15])
    g_hf = lsc.grad_e0(site, a, 32, method="hf")
    g_fd = lsc.grad_e0(site, a, 32, method="fd")
    rel = abs(g_hf[0] - g_fd[0]) / max(abs(g_hf[0]), abs(g_fd[0]))
    assert rel <= 1e-3
    assert np.sign(g_fd[0]) == -1.0  # energy falls toward the +corner


def test_gradient_antisymmetric():
    site = default_site()
    gp = lsc.grad_e0(site, np.array([0.12]), 32, method="hf")
    gm = lsc.grad_e0(site, np.array([-0.12]), 32, method="hf")
    assert np.isclose(gp[0], -gm[0], atol=1e-6)


def test_fd_gradient_needs_interior_point():
    site = default_site()
    with pytest.raises(ConfigError):
        lsc.grad_e0(site, np.array([site.d_max]), 16, method="fd")


def test_scan_classifies_default_site_corner_minimized():
    # d=1 spread is ~0.54, so the flat cutoff 100 h^2 ||q||_inf needs m >= 48
    site = default_site()
    table = lsc.scan_landscape(site, 5, 48, 1)
    assert table.classification == "corner-minimized"
    assert table.monotonicity_violations == 0
    assert table.argmin() in table.corner_indices()
    assert table.argmax() == (2,)


def test_scan_classifies_alt2_flat():
    site = make_alt2_site()
    table = lsc.scan_landscape(site, 5, 32, 1)
    assert table.classification == "flat"
    bound = 10.0 * (1.0 / 32) ** 2 * site.q_inf(1)
    assert np.max(np.abs(table.e0)) <= bound


def test_scan_axes_symmetric_and_gradient_shape():
    site = default_site()
    table = lsc.scan_landscape(site, 5, 12, 2, with_grad=True)
    assert np.allclose(table.axes + table.axes[::-1], 0.0)
    assert table.grad.shape == (5, 5, 2)
    assert table.e0.shape == (5, 5)
    # mirror symmetry of the scanned energies
    assert np.allclose(table.e0, table.e0[::-1, :], atol=1e-8)
    assert np.allclose(table.e0, table.e0.T, atol=1e-8)


def test_perturbation_identity_interior_point():
    site = default_site()
    out = lsc.perturbation_identity(site, site.d_max / 2.0, m=64, k_max=12)
    assert out["rel_err"] <= 0.05
    assert out["lhs"] <= 0.0
    assert out["rhs"] <= 0.0
    # the tail estimate is a small correction, not the story
    assert abs(out["tail"]) < 0.5 * abs(out["rhs"])


def test_monotone_integral_reconstructs_derivative():
    site = default_site()
    grid = np.linspace(-0.18, 0.18, 7)
    out = lsc.monotone_integral(site, grid, 64)
    assert out["l2_mismatch"] <= 1e-2


def test_coupling_curvature_neumann_first_order_translation():
    # the flat free ground state makes first order blind to grid-aligned shifts
    site = default_site()
    m = 16
    out0 = lsc.coupling_curvature(site, np.array([0.0]), m)
    out1 = lsc.coupling_curvature(site, np.array([1.0 / m]), m)
    assert np.isclose(out0["first_order"], out1["first_order"], atol=1e-10)
    assert out0["second_order"] < 0.0
