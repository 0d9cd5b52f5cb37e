"""Integrated density of states for 1d chains of displaced bumps.

Counting eigenvalues below each grid energy on long Neumann chains and
dividing by the cell count gives the finite-volume IDS; its tail just above
the spectral bottom separates the log-squared law of binary displacements
from any power law, which is what tail_fit decides.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import eigen, grids
from .configs import reference_ground_energy
from .errors import ConfigError, InconclusiveError
from .mc import _manifest, _run_trials
from .sites import sample_config

_TAIL_WINDOW = 0.5  # fit window above the spectral bottom
_MIN_TAIL_POINTS = 8


@dataclasses.dataclass
class IdsCurve:
    """States per unit length below each grid energy, averaged over trials."""

    e_grid: np.ndarray
    n_of_e: np.ndarray
    extent: int
    trials: int
    m: int
    law: str
    seed: int

    def __post_init__(self):
        self.e_grid = np.asarray(self.e_grid, dtype=float)
        self.n_of_e = np.asarray(self.n_of_e, dtype=float)
        if self.e_grid.ndim != 1 or self.e_grid.shape != self.n_of_e.shape:
            raise ConfigError("energy grid and values must be equal-length 1d")
        if np.any(np.diff(self.e_grid) <= 0):
            raise ConfigError("energy grid must increase strictly")
        if np.any(self.n_of_e < 0):
            raise ConfigError("counting functions are nonnegative")
        if np.any(np.diff(self.n_of_e) < 0):
            raise ConfigError("counting functions are nondecreasing")

    def to_dict(self):
        return {
            "e_grid": self.e_grid.tolist(),
            "n_of_e": self.n_of_e.tolist(),
            "extent": self.extent,
            "trials": self.trials,
            "m": self.m,
            "law": self.law,
            "seed": self.seed,
        }


def default_energy_grid(site, e_ref, n_points=16, lo_frac=1e-3, hi_frac=0.5):
    """Geometric ladder of offsets above the reference energy.

    Spans lo_frac..hi_frac of the site amplitude, dense enough near the
    bottom to resolve a log-scale tail.
    """
    scale = site.amplitude if site.amplitude > 0 else 1.0
    offsets = np.geomspace(lo_frac * scale, hi_frac * scale, int(n_points))
    return e_ref + offsets


def ids_curve(law, site, extent, e_grid, trials, seed, m, threads=1):
    """Mean states-per-cell below each grid energy on Neumann chains.

    The operator is tridiagonal, so every energy is counted by an O(n)
    Sturm pass; pass e_grid=None for the default ladder (anchored at the
    single-cell corner energy at the same resolution, so discretization
    offsets cancel).
    """
    if trials < 1:
        raise ConfigError("need at least one trial")
    e_ref = reference_ground_energy(site, m, 1)
    if e_grid is None:
        e_grid = default_energy_grid(site, e_ref)
    e_grid = np.asarray(e_grid, dtype=float)
    grid = grids.Grid.box(1, extent, m, bc="neumann")
    cells = 2 * extent + 1

    def one(t):
        config = sample_config(law, 1, extent, seed, stream=(extent, t))
        op = grids.assemble(grid, config, site)
        return eigen.count_below_many(op, e_grid)

    counts = np.array(_run_trials(one, trials, threads), dtype=float)
    return IdsCurve(
        e_grid=e_grid,
        n_of_e=counts.mean(axis=0) / cells,
        extent=extent,
        trials=trials,
        m=m,
        law=law.kind,
        seed=seed,
    )


def free_ids_oracle(e_grid, extent, m):
    """Exact counting function of the zero-potential Neumann chain.

    The cell-centered Neumann Laplacian on n nodes has eigenvalues
    (4/h^2) sin^2(pi k / (2n)), k = 0..n-1; this is the closed form the
    zero-amplitude curve must reproduce bit for bit.
    """
    n = (2 * extent + 1) * m
    lam = (4.0 * m * m) * np.sin(np.pi * np.arange(n) / (2.0 * n)) ** 2
    e_grid = np.asarray(e_grid, dtype=float)
    return np.searchsorted(lam, e_grid, side="left") / float(2 * extent + 1)


def tail_fit(curve, e0):
    """Log-squared versus power-law fit of the IDS tail above e0.

    Both models are fitted to the grid energies within the tail window that
    carry nonzero counts: log N against -2 log|log(E - e0)| and against
    log(E - e0).  The model with the smaller residual is preferred, and for
    a binary displacement law the fitted power must stay below 1/2 (the
    tail is strictly fatter than the free square root).
    """
    delta = curve.e_grid - float(e0)
    keep = (delta > 0.0) & (delta <= _TAIL_WINDOW) & (curve.n_of_e > 0.0)
    if int(keep.sum()) < _MIN_TAIL_POINTS:
        raise InconclusiveError(
            f"only {int(keep.sum())} nonzero tail points within "
            f"{_TAIL_WINDOW} of e0; need {_MIN_TAIL_POINTS}"
        )
    delta = delta[keep]
    y = np.log(curve.n_of_e[keep])
    x_log = -2.0 * np.log(np.abs(np.log(delta)))
    x_pow = np.log(delta)

    def fit(x):
        slope, intercept = np.polyfit(x, y, 1)
        ssr = float(np.sum((y - (slope * x + intercept)) ** 2))
        return float(slope), float(intercept), ssr

    slope_log, icept_log, ssr_log = fit(x_log)
    beta, icept_pow, ssr_pow = fit(x_pow)
    out = {
        "n_points": int(keep.sum()),
        "c_log": float(np.exp(icept_log)),
        "slope_log": slope_log,
        "ssr_log": ssr_log,
        "c_pow": float(np.exp(icept_pow)),
        "beta": beta,
        "ssr_pow": ssr_pow,
        "preferred": "log" if ssr_log <= ssr_pow else "power",
    }
    if curve.law in ("corner_uniform", "bernoulli") and not beta < 0.5:
        raise InconclusiveError(
            f"binary-law tail fitted power {beta:.3f} is not below 1/2"
        )
    return out


def synthetic_curve(e_grid, e0, model, c, beta=0.5):
    """IdsCurve following a known tail law, for fitting self-checks."""
    e_grid = np.asarray(e_grid, dtype=float)
    delta = e_grid - float(e0)
    if np.any(delta <= 0):
        raise ConfigError("synthetic grids must lie above e0")
    if np.any(delta >= 1.0) and model == "log":
        raise ConfigError("the log model needs the grid within e0 + (0, 1)")
    if model == "log":
        values = c / np.log(delta) ** 2
    elif model == "power":
        values = c * delta**beta
    else:
        raise ConfigError(f"unknown synthetic model {model!r}")
    return IdsCurve(
        e_grid=e_grid,
        n_of_e=values,
        extent=0,
        trials=0,
        m=0,
        law="synthetic",
        seed=0,
    )


def ids_report(law, site, extent, trials, seed, m, e_grid=None, threads=1):
    """Curve plus tail fit in one call, with the manifest attached."""
    curve = ids_curve(law, site, extent, e_grid, trials, seed, m, threads=threads)
    e_ref = reference_ground_energy(site, m, 1)
    fit = tail_fit(curve, e_ref)
    return {
        "manifest": _manifest(
            "ids", law, site, m, seed, d=1, extent=extent, trials=trials
        ),
        "e_reference": e_ref,
        "curve": curve,
        "tail": fit,
    }
