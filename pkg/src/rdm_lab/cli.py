"""Command-line front end: every experiment behind one reproducible binary.

Each subcommand resolves its parameters from three layers (shipped
defaults, explicit flags, then an optional manifest file that overrides
both), runs the experiment, and writes a data file plus a .meta.json
carrying the manifest and its hash.  Result bytes depend only on the
manifest hash inputs, never on thread count or output location.
"""

from __future__ import annotations

import argparse
import json
import os
import pathlib
import sys
from importlib import resources

import numpy as np

from . import configs, eigen, grids, ids as ids1d, landscape as lsc, mc
from . import manifest as mf
from .errors import RdmLabError
from .sites import DisplacementLaw, SingleSite, default_site, minimizer_config

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_ASSERT = 3

_COMMANDS = (
    "landscape",
    "perturb",
    "minimizer",
    "enum1d",
    "tube",
    "lifshitz",
    "wegner",
    "keybound",
    "ids",
    "decay",
    "constants",
)


def load_defaults():
    with resources.files("rdm_lab").joinpath("defaults.json").open(
        encoding="utf-8"
    ) as fh:
        return json.load(fh)


def _site_of(choice, defaults):
    """Site from a preset name, a JSON file path, or an inline dict."""
    if isinstance(choice, dict):
        return SingleSite.from_dict(choice)
    if choice is None:
        choice = "default"
    choice = str(choice)
    presets = defaults["sites"]
    if choice in presets:
        return SingleSite.from_dict(presets[choice])
    path = pathlib.Path(choice)
    if path.suffix == ".json" and path.exists():
        return SingleSite.from_dict(json.loads(path.read_text(encoding="utf-8")))
    raise RdmLabError(
        f"unknown site {choice!r}; use one of {sorted(presets)} or a JSON file"
    )


def _law_of(name, site):
    return DisplacementLaw.from_name(str(name), site.d_max)


def _int_list(value):
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(tok) for tok in str(value).split(",") if tok.strip()]


def _float_list(value):
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(tok) for tok in str(value).split(",") if tok.strip()]


# ---------------------------------------------------------------------------
# subcommand handlers: params dict -> (payload, tables, logs, checks)


def _cmd_landscape(p, defaults):
    site = _site_of(p.get("site"), defaults)
    d = int(p.get("dim", 2))
    res = int(p.get("grid_res", 9))
    m = int(p.get("resolution", 24))
    table = lsc.scan_landscape(site, res, m, d, with_grad=True)
    d_max = site.d_max
    interior_sign_violations = 0
    rows = []
    for idx in np.ndindex(*table.e0.shape):
        a = table.point(idx)
        g = table.grad[idx]
        rows.append(list(a) + [table.e0[idx]] + list(g))
        if np.all(np.abs(a) < d_max):  # interior points only
            for j in range(d):
                if abs(a[j]) >= d_max / 8.0 and np.sign(g[j]) != np.sign(-a[j]):
                    interior_sign_violations += 1
    corner_vals = np.array([table.e0[i] for i in table.corner_indices()])
    argmin = table.argmin()
    argmax = table.argmax()
    center = (int(np.argmin(np.abs(table.axes))),) * d
    payload = {
        "classification": table.classification,
        "monotonicity_violations": table.monotonicity_violations,
        "interior_sign_violations": interior_sign_violations,
        "argmin_point": table.point(argmin),
        "argmax_point": table.point(argmax),
        "corner_spread": float(corner_vals.max() - corner_vals.min()),
        "e0_min": float(table.e0.min()),
        "e0_max": float(table.e0.max()),
    }
    checks = [
        ("no energy increase outward along any axis", table.monotonicity_violations == 0),
        ("derivatives point away from the corners nowhere", interior_sign_violations == 0),
        ("maximum at the centered displacement", argmax == center),
        ("minimum on the corner set", argmin in table.corner_indices()),
        ("corner values within 1e-8", float(corner_vals.max() - corner_vals.min()) <= 1e-8),
    ]
    cols = [f"a_{j+1}" for j in range(d)] + ["e0"] + [f"g_{j+1}" for j in range(d)]
    return payload, {"": (cols, rows)}, {}, checks


def _cmd_perturb(p, defaults):
    site = _site_of(p.get("site"), defaults)
    m = int(p.get("resolution", 128))
    k_max = int(p.get("k_max", 12))
    if p.get("a1") is not None:
        a1_values = _float_list(p["a1"])
    else:
        a1_values = [f * site.d_max for f in p.get("a1_fracs", [0.25, 0.5, 0.75])]
    rows = []
    worst = 0.0
    sides_ok = True
    for a1 in a1_values:
        out = lsc.perturbation_identity(site, a1, m=m, k_max=k_max)
        rows.append([a1, out["lhs"], out["rhs"], out["rel_err"], out["tail"]])
        worst = max(worst, out["rel_err"])
        sides_ok = sides_ok and out["lhs"] <= 0.0 and out["rhs"] <= 0.0
    grid_a1 = np.linspace(-0.75 * site.d_max, 0.75 * site.d_max, 7)
    mono = lsc.monotone_integral(site, grid_a1, m, k_max=k_max)
    curv = lsc.coupling_curvature(site, np.array([site.d_max / 2.0]), m)
    payload = {
        "worst_rel_err": worst,
        "monotone_l2_mismatch": mono["l2_mismatch"],
        "coupling_first_order": curv["first_order"],
        "coupling_second_order": curv["second_order"],
    }
    checks = [
        ("identity relative error within 5%", worst <= 0.05),
        ("both identity sides nonpositive", sides_ok),
        ("derivative curve reconstructs within 1%", mono["l2_mismatch"] <= 1e-2),
    ]
    cols = ["a1", "lhs", "rhs", "rel_err", "tail"]
    tables = {
        "": (cols, rows),
        "monotone": (
            ["a1", "e0_prime_fd", "e0_prime_reconstructed"],
            list(
                zip(
                    mono["a1_grid"],
                    mono["e0_prime_fd"],
                    mono["e0_prime_reconstructed"],
                )
            ),
        ),
    }
    return payload, tables, {}, checks


def _cmd_minimizer(p, defaults):
    site = _site_of(p.get("site"), defaults)
    d = int(p.get("dim", 2))
    m = int(p.get("resolution", 24))
    extent = int(p.get("extent", 1))
    equality = configs.corner_period_equality(site, m, d)
    config = minimizer_config(d, extent, site.d_max)
    bracket = configs.bracketing_check(site, config, m)
    faces = configs.cell_neumann_residual(site, config, m)
    payload = {
        "corner_period_gap": equality["gap"],
        "e0_corner_cell": equality["e0_corner_cell"],
        "e0_period_cell": equality["e0_period_cell"],
        "bracketing_residual": bracket["residual"],
        "bracketing_bound": bracket["bound"],
        "max_face_norm": faces["max_face_norm"],
        "face_bound": faces["bound"],
        "nonmatching_pairs": len(faces["nonmatching_pairs"]),
    }
    checks = [
        ("periodized pattern reproduces the corner energy", abs(equality["gap"]) <= 1e-5),
        ("per-cell lower bound holds", bracket["residual"] <= bracket["bound"]),
        ("cell-face normal derivatives vanish", faces["max_face_norm"] <= faces["bound"]),
    ]
    rows = [[k, v] for k, v in payload.items()]
    return payload, {"": (["quantity", "value"], rows)}, {}, checks


def _cmd_enum1d(p, defaults):
    site = _site_of(p.get("site"), defaults)
    m = int(p.get("resolution", 64))
    periods = _int_list(p.get("periods", [2, 4, 6, 8]))
    rows = []
    all_ok = True
    margins_ok = True
    for period in periods:
        out = configs.enumerate_1d_periodic(site, period, m)
        if out["even"]:
            ok = bool(out["sets_equal"])
            all_ok = all_ok and ok
        else:
            ok = None
        margins_ok = margins_ok and out["margin"] > 1e-5
        rows.append(
            [
                period,
                out["even"],
                len(out["minimizers"]),
                len(out["balanced"]),
                ok,
                out["margin"],
            ]
        )
    payload = {"periods": periods, "rows": rows}
    checks = [
        ("even-period minimizers are exactly the balanced patterns", all_ok),
        ("strict margins above the floor", margins_ok),
    ]
    cols = ["period", "even", "n_minimizers", "n_balanced", "sets_equal", "margin"]
    return payload, {"": (cols, rows)}, {}, checks


def _cmd_tube(p, defaults):
    site = _site_of(p.get("site", defaults["tube"].get("site", "strong")), defaults)
    m = int(p.get("resolution", 12))
    extents = _int_list(p.get("extents", p.get("extent", [2, 4, 8, 16])))
    out = configs.tube_gap(site, extents, m)
    control = configs.tube_gap(site, extents[:1], m, matched=True)
    rows = [
        [ell, out["gaps"][i], out["c_values"][i], out["nonmatching_pairs"][i]]
        for i, ell in enumerate(extents)
    ]
    payload = {
        "extents": extents,
        "gaps": out["gaps"],
        "c_values": out["c_values"],
        "c_fit": out["c_fit"],
        "spread": out["spread"],
        "matched_control_gap": float(control["gaps"][0]),
        "e_reference": out["e_reference"],
    }
    checks = [
        ("one broken face costs energy at every length", bool(np.all(out["gaps"] > 0))),
        ("scaled gaps within a 3x band", out["spread"] <= 3.0),
        ("matched control pastes exactly", abs(float(control["gaps"][0])) <= 1e-8),
    ]
    cols = ["extent", "gap", "gap_times_L2", "nonmatching_pairs"]
    return payload, {"": (cols, rows)}, {}, checks


def _cmd_lifshitz(p, defaults):
    site = _site_of(p.get("site"), defaults)
    law = _law_of(p.get("law", "corner_uniform"), site)
    d = int(p.get("dim", 2))
    m = int(p.get("resolution", 16))
    extents = _int_list(p.get("extents", p.get("extent", [1, 2, 3])))
    c1 = float(p.get("c1", defaults["lifshitz"]["c1"]))
    trials = int(p.get("trials", 200))
    seed = int(p.get("seed", 20260819))
    threads = int(p.get("threads", 1))
    out = mc.lifshitz_mc(law, site, extents, c1, trials, seed, m, d=d, threads=threads)
    rows = []
    records = []
    estimates = []
    for ell in extents:
        if not out["completed"][ell]:
            continue
        summ = out["per_extent"][ell]
        estimates.append(summ.estimate)
        rows.append(
            [ell, summ.trials, summ.hits, summ.estimate, summ.ci95[0], summ.ci95[1]]
        )
        records.append(summ.to_dict())
    done = [ell for ell in extents if out["completed"][ell]]
    decreasing = all(estimates[i] > estimates[i + 1] for i in range(len(estimates) - 1))
    separated = (
        len(estimates) >= 2
        and out["per_extent"][done[0]].ci95[0] > out["per_extent"][done[-1]].ci95[1]
    )
    payload = {
        "e_reference": out["e_reference"],
        "c1": c1,
        "extents": extents,
        "estimates": estimates,
        "completed": out["completed"],
        "errors": out["errors"],
    }
    checks = [
        ("all extents completed", all(out["completed"].values())),
        ("hit rates strictly decreasing in extent", decreasing),
        ("smallest and largest extents separate at 95%", separated),
    ]
    cols = ["extent", "trials", "hits", "estimate", "ci_lo", "ci_hi"]
    return payload, {"": (cols, rows)}, {"": records}, checks


def _cmd_wegner(p, defaults):
    site = _site_of(p.get("site"), defaults)
    law = _law_of(p.get("law", "corner_smoothed"), site)
    d = int(p.get("dim", 2))
    m = int(p.get("resolution", 16))
    extent = int(p.get("extent", 2))
    delta_top = float(p.get("delta_top", defaults["wegner"]["delta_top"]))
    halvings = int(p.get("halvings", defaults["wegner"]["halvings"]))
    trials = int(p.get("trials", 200))
    seed = int(p.get("seed", 20260819))
    threads = int(p.get("threads", 1))
    e_ref = configs.reference_ground_energy(site, m, d)
    intervals = mc.anchored_intervals(e_ref, delta_top, halvings)
    out = mc.wegner_count_mc(
        law, site, extent, intervals, trials, seed, m, d=d, threads=threads
    )
    res = out["per_extent"][extent]
    means = res["means"]
    rows = [
        [lo, hi, hi - lo, means[i]] for i, (lo, hi) in enumerate(res["intervals"])
    ]
    decreasing = all(means[i] > means[i + 1] for i in range(len(means) - 1))
    exponent = res["exponent_width"]
    payload = {
        "e_reference": e_ref,
        "delta_top": delta_top,
        "means": means,
        "exponent_width": exponent,
        "inclusion_violations": res["inclusion_violations"],
        "control_max": int(res["control_counts"].max()),
    }
    record = {
        "extent": extent,
        "trials": trials,
        "means": mf.jsonable(means),
        "exponent_width": exponent,
    }
    checks = [
        ("mean count drops at every halving", decreasing),
        ("no states below the spectral bottom margin", int(res["control_counts"].max()) == 0),
        ("count monotone under interval inclusion", res["inclusion_violations"] == 0),
        ("width exponent within (0, 1.5]", exponent is not None and 0.0 < exponent <= 1.5),
    ]
    cols = ["lo", "hi", "width", "mean_count"]
    return payload, {"": (cols, rows)}, {"": [record]}, checks


def _cmd_keybound(p, defaults):
    site = _site_of(p.get("site"), defaults)
    law = _law_of(p.get("law", "corner_smoothed"), site)
    d = int(p.get("dim", 1))
    m = int(p.get("resolution", 64))
    extent = int(p.get("extent", 2))
    trials = int(p.get("trials", 100))
    seed = int(p.get("seed", 20260819))
    threads = int(p.get("threads", 1))
    delta2 = p.get("delta2")
    out = mc.keybound_mc(
        law,
        site,
        extent,
        trials,
        seed,
        m,
        d=d,
        delta2=None if delta2 is None else float(delta2),
        threads=threads,
    )
    rows = [[i, s] for i, s in enumerate(out["s_values"])]
    payload = {
        "e_reference": out["e_reference"],
        "delta2": out["delta2"],
        "n_scored": out["n_scored"],
        "n_boundary": out["n_boundary"],
        "s_min": out["s_min"],
        "s_median": out["s_median"],
        "delta1": out["delta1"],
    }
    record = dict(payload)
    record["trials"] = trials
    checks = [
        ("some trials pass the energy filter", out["n_scored"] >= 1),
        (
            "form strictly positive on scored non-boundary trials",
            out["delta1"] is not None and out["delta1"] > 0.0,
        ),
    ]
    return payload, {"": (["index", "s_value"], rows)}, {"": [record]}, checks


def _cmd_ids(p, defaults):
    site = _site_of(p.get("site"), defaults)
    law = _law_of(p.get("law", "corner_uniform"), site)
    m = int(p.get("resolution", 32))
    extent = int(p.get("extent", 2000))
    trials = int(p.get("trials", 20))
    seed = int(p.get("seed", 20260819))
    threads = int(p.get("threads", 1))
    rep = ids1d.ids_report(law, site, extent, trials, seed, m, threads=threads)
    curve = rep["curve"]
    fit = rep["tail"]
    rows = list(zip(curve.e_grid, curve.n_of_e))
    payload = {
        "e_reference": rep["e_reference"],
        "tail": fit,
        "extent": extent,
        "trials": trials,
    }
    record = {"extent": extent, "trials": trials, "tail": fit}
    binary = law.kind == "corner_uniform"
    checks = [
        ("counting curve nondecreasing", bool(np.all(np.diff(curve.n_of_e) >= 0))),
        (
            "binary-law tail fatter than the free square root",
            (not binary) or fit["beta"] < 0.5,
        ),
    ]
    return payload, {"": (["energy", "states_per_cell"], rows)}, {"": [record]}, checks


def _cmd_decay(p, defaults):
    site = _site_of(p.get("site"), defaults)
    law = _law_of(p.get("law", "corner_smoothed"), site)
    d = int(p.get("dim", 2))
    m = int(p.get("resolution", 12))
    extent = int(p.get("extent", 3))
    n_eigs = int(p.get("n_eigs", 1))
    trials = int(p.get("trials", 10))
    seed = int(p.get("seed", 20260819))
    threads = int(p.get("threads", 1))
    out = mc.eigenfunction_decay(
        law, site, extent, n_eigs, trials, seed, m, d=d, threads=threads
    )
    rows = [
        [t, k, out["rates"][t, k]]
        for t in range(out["rates"].shape[0])
        for k in range(out["rates"].shape[1])
    ]
    payload = {
        "mean_rate": out["mean_rate"],
        "fraction_positive": out["fraction_positive"],
    }
    checks = [
        ("mass profiles decay for most samples", out["fraction_positive"] > 0.5),
    ]
    return payload, {"": (["trial", "eig", "rate"], rows)}, {}, checks


def _cmd_constants(p, defaults):
    site = _site_of(p.get("site"), defaults)
    d = int(p.get("dim", 2))
    res = int(p.get("grid_res", 9))
    m_scan = int(p.get("landscape_resolution", 24))
    table = lsc.scan_landscape(site, res, m_scan, d)
    c2 = mc.corner_slope_c2(table)
    form_law = _law_of(p.get("form_law", "box_uniform"), site)
    c3 = mc.form_compare_c3(
        form_law,
        site,
        int(p.get("form_extent", 1)),
        int(p.get("form_trials", 50)),
        int(p.get("seed", 20260819)),
        int(p.get("form_resolution", 16)),
        d=d,
        threads=int(p.get("threads", 1)),
    )
    payload = {
        "c2": c2["c2"],
        "c2_argmax_point": c2["argmax_point"],
        "c3": c3["c3"],
        "c3_n_excluded": c3["n_excluded"],
        "c3_n_flagged": c3["n_flagged"],
    }
    checks = [
        ("corner slope constant finite", np.isfinite(c2["c2"])),
        ("form comparison constant finite", np.isfinite(c3["c3"])),
    ]
    rows = [["c2", c2["c2"]], ["c3", c3["c3"]]]
    return payload, {"": (["name", "value"], rows)}, {}, checks


_HANDLERS = {
    "landscape": _cmd_landscape,
    "perturb": _cmd_perturb,
    "minimizer": _cmd_minimizer,
    "enum1d": _cmd_enum1d,
    "tube": _cmd_tube,
    "lifshitz": _cmd_lifshitz,
    "wegner": _cmd_wegner,
    "keybound": _cmd_keybound,
    "ids": _cmd_ids,
    "decay": _cmd_decay,
    "constants": _cmd_constants,
}


# ---------------------------------------------------------------------------
# argument parsing and the run loop


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="rdm-lab",
        description="Numerical experiments on random displacement operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name, help=f"run the {name} experiment")
        cmd.add_argument("--site", default=None, help="site preset or JSON file (default: default)")
        cmd.add_argument("--law", default=None, help="displacement law name")
        cmd.add_argument("--dim", type=int, default=None, help="space dimension")
        cmd.add_argument(
            "--extent",
            default=None,
            help="box half-extent L, or comma list where a sweep is meant",
        )
        cmd.add_argument("--resolution", type=int, default=None, help="nodes per unit cell m")
        cmd.add_argument("--trials", type=int, default=None, help="Monte Carlo trials")
        cmd.add_argument("--seed", type=int, default=None, help="master seed")
        cmd.add_argument("--out", default=None, help="output directory (default: cwd)")
        cmd.add_argument(
            "--manifest", default=None, help="JSON manifest file; overrides all flags"
        )
        cmd.add_argument(
            "--format", choices=("csv", "json"), default="csv", help="table format"
        )
        cmd.add_argument(
            "--assert",
            dest="assert_mode",
            action="store_true",
            help="exit 3 unless every invariant check passes",
        )
        cmd.add_argument("--threads", type=int, default=None, help="worker cap (default 1)")
        if name == "landscape":
            cmd.add_argument("--grid-res", type=int, default=None, help="points per displacement axis")
        if name == "perturb":
            cmd.add_argument("--a1", default=None, help="comma list of first displacement components")
            cmd.add_argument("--k-max", type=int, default=None, help="modes before the tail estimate")
        if name == "enum1d":
            cmd.add_argument("--periods", default=None, help="comma list of period lengths")
        if name == "wegner":
            cmd.add_argument("--delta-top", type=float, default=None, help="widest interval above the bottom")
            cmd.add_argument("--halvings", type=int, default=None, help="number of width halvings")
        if name == "lifshitz":
            cmd.add_argument("--c1", type=float, default=None, help="threshold constant in c1/L^2")
        if name == "keybound":
            cmd.add_argument("--delta2", type=float, default=None, help="energy filter width")
        if name == "decay":
            cmd.add_argument("--n-eigs", type=int, default=None, help="eigenvectors per trial")
        if name == "constants":
            cmd.add_argument("--grid-res", type=int, default=None, help="points per displacement axis")
    return parser


_FLAG_KEYS = {
    "site": "site",
    "law": "law",
    "dim": "dim",
    "resolution": "resolution",
    "trials": "trials",
    "seed": "seed",
    "threads": "threads",
    "grid_res": "grid_res",
    "a1": "a1",
    "k_max": "k_max",
    "periods": "periods",
    "delta_top": "delta_top",
    "halvings": "halvings",
    "c1": "c1",
    "delta2": "delta2",
    "n_eigs": "n_eigs",
}


def _resolve_params(args, defaults):
    """Layer defaults, then flags, then the manifest file."""
    params = dict(defaults.get(args.command, {}))
    for attr, key in _FLAG_KEYS.items():
        value = getattr(args, attr, None)
        if value is not None:
            params[key] = value
    if getattr(args, "extent", None) is not None:
        ext = _int_list(args.extent)
        if args.command in ("tube", "lifshitz"):
            params["extents"] = ext
        else:
            params["extent"] = ext[0] if len(ext) == 1 else ext
    if args.manifest:
        loaded = mf.load_manifest(args.manifest)
        if loaded.get("command") not in (None, args.command):
            raise RdmLabError(
                f"manifest is for {loaded.get('command')!r}, not {args.command!r}"
            )
        params.update(loaded["params"])
    for key in ("threads",):
        params.setdefault(key, 1)
    return params


def _out_dir(args):
    env = os.environ.get("RDM_LAB_OUT")
    base = env if env else (args.out if args.out else ".")
    path = pathlib.Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


def run(argv=None):
    """Parse, execute, and write results; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 0
        return EXIT_OK if code == 0 else EXIT_USAGE
    defaults = load_defaults()
    try:
        params = _resolve_params(args, defaults)
        payload, tables, logs, checks = _HANDLERS[args.command](params, defaults)
    except RdmLabError as exc:
        diagnostic = {
            "command": args.command,
            "error": type(exc).__name__,
            "message": str(exc),
        }
        print(json.dumps(diagnostic, sort_keys=True))
        try:
            mf.write_json(_out_dir(args) / f"{args.command}.error.json", diagnostic)
        except OSError:
            pass
        return EXIT_NUMERIC

    man = mf.build_manifest(args.command, params)
    sha = mf.manifest_sha256(man)
    out = _out_dir(args)
    base = args.command
    meta = {
        "manifest": {**man, "params": {k: v for k, v in man["params"].items() if k != "threads"}},
        "manifest_sha256": sha,
        "report": mf.jsonable(payload),
        "checks": [{"name": n, "ok": bool(ok)} for n, ok in checks],
    }
    written = [mf.write_json(out / f"{base}.meta.json", meta)]
    for tname, (cols, rows) in tables.items():
        suffix = f".{tname}" if tname else ""
        if args.format == "csv":
            written.append(mf.write_csv(out / f"{base}{suffix}.csv", cols, rows, sha=sha))
        else:
            written.append(
                mf.write_json(
                    out / f"{base}{suffix}.data.json",
                    {"manifest_sha256": sha, "columns": cols, "rows": mf.jsonable(rows)},
                )
            )
    for lname, records in logs.items():
        if not records:
            continue
        suffix = f".{lname}" if lname else ""
        stamped = [{**mf.jsonable(r), "manifest_sha256": sha} for r in records]
        written.append(mf.write_jsonl(out / f"{base}{suffix}.jsonl", stamped))

    failed = [n for n, ok in checks if not ok]
    for n, ok in checks:
        print(f"{'ok' if ok else 'FAIL'}: {n}")
    print(f"wrote {', '.join(str(w) for w in written)}")
    if args.assert_mode and failed:
        return EXIT_ASSERT
    return EXIT_OK


def main(argv=None):
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
