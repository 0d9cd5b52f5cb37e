"""Monte Carlo experiments over random displacement configurations.

Estimates the low-energy tail probability P(ground energy < E_0(a*) + C1/L^2),
the corner-slope and form-comparison constants of the landscape, expected
eigenvalue counts in shrinking intervals, the positivity of the
corner-directed derivative form on near-minimal ground states, and
qualitative eigenfunction decay.  Trials draw from counter-based per-cell
streams keyed by (seed, extent, trial), so estimates are bit-identical for
any trial schedule and any thread count.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import eigen, grids
from .configs import _interleaved, reference_ground_energy
from .errors import AlternativeTwoError, ConfigError, InconclusiveError, RdmLabError
from .sites import (
    DisplacementConfig,
    SingleSite,
    corner_projection,
    minimizer_values,
    sample_config,
)

_Z95 = 1.96


def wilson_interval(hits, trials, z=_Z95):
    """Wilson score interval for a binomial proportion; contains hits/trials."""
    hits = int(hits)
    trials = int(trials)
    if trials <= 0 or not (0 <= hits <= trials):
        raise ConfigError("need 0 <= hits <= trials with trials >= 1")
    p = hits / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials))
    half /= denom
    # the exact interval contains p; keep that under floating-point rounding
    return (max(0.0, min(center - half, p)), min(1.0, max(center + half, p)))


@dataclasses.dataclass
class McSummary:
    """One Monte Carlo estimate with its Wilson 95% interval and provenance."""

    trials: int
    hits: int
    estimate: float
    ci95: tuple
    seed: int
    manifest: dict

    def __post_init__(self):
        if not (0.0 <= self.estimate <= 1.0):
            raise ConfigError("estimate must lie in [0, 1]")
        if not (self.ci95[0] <= self.estimate <= self.ci95[1]):
            raise ConfigError("interval must contain the estimate")

    def to_dict(self):
        return {
            "trials": self.trials,
            "hits": self.hits,
            "estimate": self.estimate,
            "ci95": list(self.ci95),
            "seed": self.seed,
            "manifest": self.manifest,
        }


def _run_trials(fn, trials, threads):
    """Evaluate fn(0..trials-1), aggregated in trial order regardless of
    how the executor schedules the work."""
    if threads is not None and int(threads) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            return list(pool.map(fn, range(trials)))
    return [fn(t) for t in range(trials)]


def _manifest(experiment, law, site, m, seed, **extra):
    out = {
        "experiment": experiment,
        "law": law.to_dict(),
        "site": site.to_dict(),
        "m": int(m),
        "seed": int(seed),
    }
    out.update(extra)
    return out


# ---------------------------------------------------------------------------
# low-energy tail probability


def lifshitz_mc(law, site, l_list, c1, trials, seed, m, d=2, threads=1):
    """Per-extent estimate of P(ground energy of H_N < E_0(a*) + c1/L^2).

    A hit is certified by failure of the banded Cholesky factorization of
    H - threshold, so no eigensolve is needed.  Extents that abort raise
    their error into the ``errors`` map and leave the rest of the sweep
    intact; ``completed`` flags which extents finished.
    """
    if trials < 1:
        raise ConfigError("need at least one trial")
    l_list = [int(l_list)] if np.isscalar(l_list) else [int(x) for x in l_list]
    e_ref = reference_ground_energy(site, m, d)
    per_extent = {}
    completed = {}
    errors = {}
    for ell in l_list:
        threshold = e_ref + c1 / float(ell) ** 2
        grid = grids.Grid.box(d, ell, m, bc="neumann")

        def one(t, ell=ell, grid=grid, threshold=threshold):
            config = sample_config(law, d, ell, seed, stream=(ell, t))
            op = grids.assemble(grid, config, site)
            return 0 if eigen.is_positive_definite_shifted(op, threshold) else 1

        try:
            flags = _run_trials(one, trials, threads)
        except RdmLabError as exc:
            completed[ell] = False
            errors[ell] = str(exc)
            continue
        hits = int(sum(flags))
        per_extent[ell] = McSummary(
            trials=trials,
            hits=hits,
            estimate=hits / trials,
            ci95=wilson_interval(hits, trials),
            seed=seed,
            manifest=_manifest(
                "lifshitz",
                law,
                site,
                m,
                seed,
                d=d,
                extent=ell,
                trials=trials,
                c1=float(c1),
                threshold=threshold,
            ),
        )
        completed[ell] = True
    return {
        "e_reference": e_ref,
        "c1": float(c1),
        "extents": l_list,
        "per_extent": per_extent,
        "completed": completed,
        "errors": errors,
    }


def calibrate_lifshitz_c1(site, m, d=2, trials=64, seed=0, law=None, quantile=0.5, threads=1):
    """Threshold offset that puts the extent-1 hit rate near ``quantile``.

    Samples extent-1 ground-energy gaps above E_0(a*) under the given law
    (corner_uniform by default) and returns the requested quantile, to be
    frozen into an experiment manifest.
    """
    from .sites import DisplacementLaw

    if law is None:
        law = DisplacementLaw(kind="corner_uniform", d_max=site.d_max)
    e_ref = reference_ground_energy(site, m, d)
    grid = grids.Grid.box(d, 1, m, bc="neumann")

    def one(t):
        config = sample_config(law, d, 1, seed, stream=(1, t))
        op = grids.assemble(grid, config, site)
        return float(eigen.smallest_eigs(op, 1).values[0]) - e_ref

    gaps = np.array(_run_trials(one, trials, threads))
    return float(np.quantile(gaps, quantile))


# ---------------------------------------------------------------------------
# landscape constants


def corner_slope_c2(landscape):
    """Largest distance-to-corner over energy-lift ratio on a scan table.

    The reciprocal of the returned value lower-bounds the linear growth of
    E_0 away from the corner set on the scanned grid.  A table point that
    matches the minimum while sitting far from every corner means the
    landscape has no corner preference, and is rejected.
    """
    site = SingleSite.from_dict(landscape.site)
    d_max = site.d_max
    e_ref = float(landscape.e0.min())
    c2 = 0.0
    worst = None
    n_used = 0
    for idx in np.ndindex(*landscape.e0.shape):
        a = landscape.point(idx)
        _, dist = corner_projection(a, d_max)
        lift = float(landscape.e0[idx]) - e_ref
        if lift <= 1e-10:
            if dist > d_max / 8.0:
                raise AlternativeTwoError(
                    f"table minimum attained at {a} with corner distance "
                    f"{dist:.3e}: no corner preference"
                )
            continue  # at or next to a corner: 0/0 excluded
        if dist == 0.0:
            continue
        n_used += 1
        ratio = dist / lift
        if ratio > c2:
            c2 = ratio
            worst = a
    if n_used == 0:
        raise ConfigError("no table point with positive corner distance")
    return {
        "c2": float(c2),
        "e_reference": e_ref,
        "argmax_point": worst,
        "n_points": n_used,
    }


def form_compare_c3(law, site, extent, trials, seed, m, d=2, threads=1):
    """Worst ratio of corner-projected to original ground-energy gaps.

    Per trial both the sampled configuration and its componentwise corner
    projection are solved; trials whose original gap is below 1e-8 are
    excluded (minimizer hits), and negative gaps beyond tolerance flagged.
    """
    if trials < 1:
        raise ConfigError("need at least one trial")
    e_ref = reference_ground_energy(site, m, d)
    grid = grids.Grid.box(d, extent, m, bc="neumann")
    d_max = law.d_max

    def one(t):
        config = sample_config(law, d, extent, seed, stream=(extent, t))
        op = grids.assemble(grid, config, site)
        g_orig = float(eigen.smallest_eigs(op, 1).values[0]) - e_ref
        projected = DisplacementConfig(
            start=config.start,
            values=np.where(config.values >= 0.0, d_max, -d_max),
            d_max=d_max,
        )
        op_proj = grids.assemble(grid, projected, site)
        g_proj = float(eigen.smallest_eigs(op_proj, 1).values[0]) - e_ref
        return g_orig, g_proj

    pairs = _run_trials(one, trials, threads)
    ratios = []
    n_flagged = 0
    n_excluded = 0
    for g_orig, g_proj in pairs:
        if g_orig < -1e-8:
            n_flagged += 1
            continue
        if g_orig <= 1e-8:
            n_excluded += 1
            continue
        ratios.append(g_proj / g_orig)
    if not ratios:
        raise InconclusiveError("every trial fell below the gap filter")
    ratios = np.array(ratios)
    return {
        "manifest": _manifest(
            "form_compare", law, site, m, seed, d=d, extent=extent, trials=trials
        ),
        "e_reference": e_ref,
        "c3": float(ratios.max()),
        "ratios": ratios,
        "n_flagged": n_flagged,
        "n_excluded": n_excluded,
    }


# ---------------------------------------------------------------------------
# eigenvalue counting in shrinking intervals


def anchored_intervals(e_ref, delta_top, n_halvings):
    """Nested intervals [e_ref, e_ref + delta_top 2^-j], j = 0..n_halvings."""
    if delta_top <= 0:
        raise ConfigError("interval width must be positive")
    return [
        (float(e_ref), float(e_ref) + float(delta_top) * 0.5**j)
        for j in range(int(n_halvings) + 1)
    ]


def _wegner_single(law, site, extent, intervals, trials, seed, m, d, threads):
    e_ref = reference_ground_energy(site, m, d)
    control = e_ref - 1.0
    energies = sorted({control} | {e for pair in intervals for e in pair})
    pos = {e: i for i, e in enumerate(energies)}
    grid = grids.Grid.box(d, extent, m, bc="neumann")

    def one(t):
        config = sample_config(law, d, extent, seed, stream=(extent, t))
        op = grids.assemble(grid, config, site)
        return eigen.count_below_many(op, energies)

    counts = np.array(_run_trials(one, trials, threads))
    lo_idx = [pos[lo] for lo, _ in intervals]
    hi_idx = [pos[hi] for _, hi in intervals]
    per_interval = counts[:, hi_idx] - counts[:, lo_idx]
    means = per_interval.mean(axis=0)
    # counting is monotone under interval inclusion, trial by trial
    violations = 0
    for i, (lo_i, hi_i) in enumerate(intervals):
        for j, (lo_j, hi_j) in enumerate(intervals):
            if i != j and lo_j <= lo_i and hi_i <= hi_j:
                violations += int(np.sum(per_interval[:, i] > per_interval[:, j]))
    widths = np.array([hi - lo for lo, hi in intervals])
    keep = means > 0
    if int(keep.sum()) >= 2:
        slope = np.polyfit(np.log(widths[keep]), np.log(means[keep]), 1)[0]
        exponent_width = float(slope)
    else:
        exponent_width = None
    return {
        "extent": extent,
        "e_reference": e_ref,
        "intervals": [tuple(p) for p in intervals],
        "widths": widths,
        "means": means,
        "per_interval_counts": per_interval,
        "control_energy": control,
        "control_counts": counts[:, pos[control]],
        "inclusion_violations": violations,
        "exponent_width": exponent_width,
    }


def wegner_count_mc(law, site, extent, intervals, trials, seed, m, d=2, threads=1):
    """Mean eigenvalue counts per interval, with width and volume exponents.

    ``intervals`` is a list of (lo, hi) energies, typically nested at the
    reference energy via anchored_intervals; a control count strictly below
    the spectral bottom is recorded per trial.  With a list of extents the
    widest interval's mean is also fitted against the box volume.
    """
    if trials < 1:
        raise ConfigError("need at least one trial")
    intervals = [(float(lo), float(hi)) for lo, hi in intervals]
    if not intervals:
        raise ConfigError("need at least one interval")
    for lo, hi in intervals:
        if hi <= lo:
            raise ConfigError(f"empty interval ({lo}, {hi})")
    extents = [int(extent)] if np.isscalar(extent) else [int(x) for x in extent]
    per_extent = {
        ell: _wegner_single(law, site, ell, intervals, trials, seed, m, d, threads)
        for ell in extents
    }
    top = int(np.argmax([hi - lo for lo, hi in intervals]))
    exponent_volume = None
    if len(extents) >= 2:
        vols = np.array([float(2 * ell + 1) ** d for ell in extents])
        tops = np.array([per_extent[ell]["means"][top] for ell in extents])
        keep = tops > 0
        if int(keep.sum()) >= 2:
            exponent_volume = float(
                np.polyfit(np.log(vols[keep]), np.log(tops[keep]), 1)[0]
            )
    return {
        "manifest": _manifest(
            "wegner",
            law,
            site,
            m,
            seed,
            d=d,
            extents=extents,
            trials=trials,
            intervals=[list(p) for p in intervals],
        ),
        "extents": extents,
        "per_extent": per_extent,
        "top_interval": intervals[top],
        "exponent_volume": exponent_volume,
    }


# ---------------------------------------------------------------------------
# corner-directed derivative form


def eta_cutoff(t, r0):
    """C^1 gate: 1 below r0, smoothstep 1-3s^2+2s^3 on (r0, 2r0), 0 beyond."""
    t = np.asarray(t, dtype=float)
    s = np.clip((t - r0) / r0, 0.0, 1.0)
    return 1.0 - 3.0 * s**2 + 2.0 * s**3


def _cell_fields(grid, config):
    """Per-node in-cell coordinate xi and the owning cell's displacement."""
    xi_axes = []
    idx_axes = []
    for a in range(grid.d):
        cells_a = grid.axis_cells(a)
        xi_axes.append(grid.axis_coords(a) - cells_a)
        idx_axes.append(cells_a - config.start[a])
    xi = np.stack(np.meshgrid(*xi_axes, indexing="ij"), axis=-1)
    omega = config.values[tuple(np.meshgrid(*idx_axes, indexing="ij"))]
    return xi, omega


def w_field_on_grid(grid, config, site):
    """Corner-directed derivative field, sampled at every node (flat).

    Per cell this is eta(|c(omega_n) - omega_n|) times the directional
    derivative of q along the unit vector from omega_n to its nearest
    corner; a displacement exactly at a corner contributes zero.
    """
    xi, omega = _cell_fields(grid, config)
    d_max = config.d_max
    diff = np.where(omega >= 0.0, d_max, -d_max) - omega
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    gate = eta_cutoff(dist, d_max / 4.0)
    unit = np.zeros_like(diff)
    off_corner = dist > 0.0
    unit[off_corner] = diff[off_corner] / dist[off_corner][..., None]
    grad = site.grad_q(xi - omega)
    return (gate * np.einsum("...k,...k->...", unit, grad)).ravel()


def keybound_delta2(site, m, d=1, tol=1e-8):
    """Half the spectral gap of the periodized alternating-corner problem.

    Sets the energy-filter scale below which a sampled ground state is
    treated as a near-minimizer.
    """
    start = (0,) * d
    cells = (2,) * d
    config = DisplacementConfig(
        start=start,
        values=minimizer_values(start, cells, site.d_max),
        d_max=site.d_max,
    )
    grid = grids.Grid.block(cells, m, bc="periodic", start=start)
    op = grids.assemble(grid, config, site)
    vals = eigen.smallest_eigs(op, 2, tol=tol).values
    return 0.5 * float(vals[1] - vals[0])


def keybound_mc(law, site, extent, trials, seed, m, d=1, delta2=None, threads=1):
    """Distribution of the corner-directed form on near-minimal ground states.

    Trials whose ground energy exceeds E_0(a*) + delta2 are filtered out;
    scored trials report S = <psi, W psi> with W from w_field_on_grid, and
    the empirical lower bound delta1 is the minimum of S over scored trials
    that are not exact corner configurations (those have S = 0 identically
    and are counted as boundary cases).
    """
    if trials < 1:
        raise ConfigError("need at least one trial")
    e_ref = reference_ground_energy(site, m, d)
    if delta2 is None:
        delta2 = keybound_delta2(site, m, d)
    grid = grids.Grid.box(d, extent, m, bc="neumann")

    def one(t):
        config = sample_config(law, d, extent, seed, stream=(extent, t))
        op = grids.assemble(grid, config, site)
        res = eigen.smallest_eigs(op, 1)
        v = res.vectors[:, 0]
        w = w_field_on_grid(grid, config, site)
        s = float(np.sum(v * v * w))
        boundary = bool(np.all(np.abs(config.values) == config.d_max))
        return float(res.values[0]) - e_ref, s, boundary

    rows = _run_trials(one, trials, threads)
    gaps = np.array([r[0] for r in rows])
    scored = [(s, b) for gap, s, b in rows if gap <= delta2]
    if not scored:
        err = InconclusiveError(
            f"no trial passed the energy filter delta2={delta2:.3e}; observed "
            f"gaps min/median/max = {gaps.min():.3e}/{np.median(gaps):.3e}/"
            f"{gaps.max():.3e}"
        )
        err.gaps = gaps
        raise err
    s_values = np.array([s for s, _ in scored])
    interior = [s for s, b in scored if not b]
    return {
        "manifest": _manifest(
            "keybound",
            law,
            site,
            m,
            seed,
            d=d,
            extent=extent,
            trials=trials,
            delta2=float(delta2),
        ),
        "e_reference": e_ref,
        "delta2": float(delta2),
        "trials": trials,
        "n_scored": len(scored),
        "n_boundary": int(sum(b for _, b in scored)),
        "s_values": s_values,
        "s_min": float(s_values.min()),
        "s_median": float(np.median(s_values)),
        "delta1": float(min(interior)) if interior else None,
        "gaps": gaps,
    }


# ---------------------------------------------------------------------------
# qualitative eigenfunction decay


def _decay_rate(masses):
    """Slope of -log(cell mass) against cell distance from the mass peak."""
    center = np.unravel_index(int(np.argmax(masses)), masses.shape)
    offsets = np.indices(masses.shape) - np.array(center).reshape(
        (-1,) + (1,) * masses.ndim
    )
    dist = np.sqrt(np.sum(offsets * offsets, axis=0)).ravel()
    mass = masses.ravel()
    keep = mass > 1e-14
    if int(keep.sum()) < 2 or np.ptp(dist[keep]) == 0.0:
        return 0.0
    slope = np.polyfit(dist[keep], np.log(mass[keep]), 1)[0]
    return float(-slope)


def eigenfunction_decay(
    law, site, extent, n_eigs, trials, seed, m, d=2, bc="neumann", threads=1
):
    """Fitted exponential decay of per-cell mass for the lowest eigenvectors.

    Reported, not asserted against a constant: finite boxes only surrogate
    the infinite-volume statement.  Rates are positive when mass drops with
    cell distance from its peak; a flat profile fits rate 0.
    """
    if d > 2:
        raise ConfigError("decay profiles are limited to d <= 2")
    if trials < 1:
        raise ConfigError("need at least one trial")
    grid = grids.Grid.box(d, extent, m, bc=bc)

    def one(t):
        config = sample_config(law, d, extent, seed, stream=(extent, t))
        op = grids.assemble(grid, config, site)
        res = eigen.smallest_eigs(op, n_eigs)
        rates = []
        for k in range(n_eigs):
            v = res.vectors[:, k]
            w = _interleaved(grid, (v * v).reshape(grid.shape))
            masses = w.sum(axis=tuple(range(1, 2 * grid.d, 2)))
            rates.append(_decay_rate(masses))
        return rates

    rates = np.array(_run_trials(one, trials, threads))
    return {
        "manifest": _manifest(
            "decay",
            law,
            site,
            m,
            seed,
            d=d,
            extent=extent,
            trials=trials,
            n_eigs=n_eigs,
            bc=bc,
        ),
        "rates": rates,
        "mean_rate": float(rates.mean()),
        "fraction_positive": float(np.mean(rates > 0.0)),
    }
