"""Command-line entry point: quick one-off calls plus config-driven experiments.

Quick calls (``lambda1d``, ``xsection``, ``mesh``) take flags; experiment
subcommands (``sweep``, ``fit``, ``agmon``, ``pullback``, ``window``,
``compare``) read a JSON config and write a JSON report plus a flat CSV.
``reproduce`` runs the acceptance suite and prints a summary table.  Reports
are split into a ``meta`` block (timestamps, versions) and a deterministic
``payload`` block: re-running with the same config and seed reproduces the
payload byte for byte.  Set ROBINPEAKS_THREADS to parallelize per-alpha
solves.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import acceptance, experiments, mesh2d, sturm1d, xsection
from .geometry import CrossSection, PeakGeometry


class ConfigError(ValueError):
    pass


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _write_report(payload: dict, path: str | None, config: dict | None = None):
    report = {
        "meta": {"created": time.strftime("%Y-%m-%dT%H:%M:%S"),
                 "tool": "robinpeaks"},
        "payload": payload,
    }
    if config is not None:
        report["payload"] = dict(payload, config=config)
    text = json.dumps(report, sort_keys=True, indent=1, default=_json_default)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return report


def _write_csv(path: str | None, columns: list, rows: list):
    if not path:
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _geometry_from_config(cfg: dict) -> PeakGeometry:
    section = CrossSection.from_json(cfg.get("cross_section",
                                             {"kind": "interval", "length": 1.0}))
    return PeakGeometry(q=float(cfg["q"]), d=int(cfg.get("d", 2)),
                        cross_section=section, a=float(cfg.get("a", 1.0)),
                        epsilon=float(cfg.get("epsilon", 1.0)))


def _cmd_lambda1d(args) -> int:
    res = sturm1d.lambda_L1(args.j, args.q, args.d, args.tol, a0=args.a0,
                            n0=args.n0, gamma=args.gamma)
    payload = res.as_dict()
    _write_report(payload, args.out)
    print(json.dumps(payload, sort_keys=True, indent=1))
    return 0 if res.converged else 1


def _cmd_xsection(args) -> int:
    spec = xsection.robin_interval_eigs(args.length, args.alpha, args.k)
    payload = {"length": args.length, "alpha": args.alpha,
               "eigenvalues": spec.eigenvalues.tolist()}
    _write_report(payload, args.out)
    print(json.dumps(payload, sort_keys=True, indent=1))
    return 0


def _cmd_mesh(args) -> int:
    mesh = mesh2d.build_peak_mesh(args.q, args.length, args.a, args.smin,
                                  args.ns, args.nt, grading=args.grading)
    mesh2d.save_text(mesh, args.out)
    payload = dict(mesh.quality_report(), area=mesh.area(),
                   area_exact=mesh2d.peak_area_exact(args.q, args.length,
                                                     args.a, args.smin),
                   out=args.out)
    print(json.dumps(payload, sort_keys=True, indent=1))
    return 0


def _run_sweep_from_config(cfg: dict) -> experiments.SweepResult:
    geometry = _geometry_from_config(cfg)
    alphas = cfg.get("alpha_list") or experiments.default_alpha_ladder(
        int(cfg.get("n_alpha", 8)), float(cfg.get("alpha_lo", 2.0)),
        float(cfg.get("alpha_hi", 16.0))).tolist()
    return experiments.sweep_alpha(
        geometry, alphas, j_count=int(cfg.get("j_count", 1)),
        mesh_budget=int(cfg.get("mesh_budget", 200_000)),
        retain_vectors=bool(cfg.get("retain_vectors", True)),
        seed=int(cfg.get("seed", 0)))


_SWEEP_COLUMNS = ["alpha", "lambda1", "s_min", "ns", "nt", "dofs",
                  "sensitivity", "residual1", "certified"]


def _sweep_rows(sweep: experiments.SweepResult) -> list:
    return [[p.alpha, p.eigenvalues[0], p.s_min, p.ns, p.nt, p.dofs,
             p.sensitivity, p.residuals[0],
             int(bool(p.certificate.get("verified")))] for p in sweep.points]


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    sweep = _run_sweep_from_config(cfg)
    payload = dict(sweep.as_dict(), csv_columns=_SWEEP_COLUMNS)
    _write_report(payload, args.out, config=cfg)
    _write_csv(args.csv, _SWEEP_COLUMNS, _sweep_rows(sweep))
    ok = all(p.certificate.get("verified") and not p.flagged
             for p in sweep.points)
    print(f"sweep: {len(sweep.points)} points, "
          f"lambda1 range [{sweep.points[-1].eigenvalues[0]:.4e}, "
          f"{sweep.points[0].eigenvalues[0]:.4e}], all certified={ok}")
    return 0 if ok else 1


def _cmd_fit(args) -> int:
    cfg = _load_config(args.config)
    if "synthetic" in cfg:
        syn = cfg["synthetic"]
        alphas = np.asarray(syn["alphas"], dtype=float)
        lams = (-abs(float(syn["coefficient"])) * alphas ** float(syn["power"]))
        if "perturbation_power" in syn:
            lams = lams + float(syn.get("perturbation_coefficient", 1.0)) \
                * alphas ** float(syn["perturbation_power"])
        sweep = experiments.synthetic_sweep(alphas, lams,
                                            q=float(cfg.get("q", 1.5)))
    else:
        sweep = _run_sweep_from_config(cfg)
    lam_l1 = cfg.get("lambda_L1")
    if lam_l1 is None and cfg.get("compute_lambda_L1", False):
        lam_l1 = sturm1d.lambda_L1(int(cfg.get("j", 1)), sweep.geometry.q,
                                   sweep.geometry.d,
                                   float(cfg.get("lambda_L1_tol", 1e-4))).value
    window = tuple(cfg["window"]) if "window" in cfg else None
    fit = experiments.fit_power_law(sweep, int(cfg.get("j", 1)), window=window,
                                    lambda_L1_value=lam_l1)
    payload = dict(fit.as_dict(), csv_columns=["alpha", "lambda"])
    _write_report(payload, args.out, config=cfg)
    _write_csv(args.csv, ["alpha", "lambda"],
               [[a, l] for a, l in zip(sweep.alphas,
                                       sweep.eigenvalue_track(int(cfg.get("j", 1))))])
    print(f"fit: slope raw {fit.slope_raw:.6f} extrapolated "
          f"{fit.slope_extrapolated:.6f} (theory {fit.theory_slope}); "
          f"coefficient raw {fit.coeff_raw:.6f} extrapolated "
          f"{fit.coeff_extrapolated:.6f}"
          + (f" (theory {fit.theory_coeff:.6f})" if fit.theory_coeff else ""))
    return 0


def _cmd_agmon(args) -> int:
    cfg = _load_config(args.config)
    sweep = _run_sweep_from_config(cfg)
    rep = experiments.agmon_ratio(sweep, float(cfg.get("b", 0.1)),
                                  j=int(cfg.get("j", 1)))
    payload = dict(rep.as_dict(), csv_columns=["alpha", "ratio", "ratio_coarse"])
    _write_report(payload, args.out, config=cfg)
    _write_csv(args.csv, ["alpha", "ratio", "ratio_coarse"],
               list(zip(rep.alphas, rep.ratios, rep.ratios_coarse)))
    print(f"agmon: b={rep.b}, ratios in [{min(rep.ratios):.6f}, "
          f"{max(rep.ratios):.6f}], growth flagged={rep.flagged_growth}")
    return 0 if not rep.flagged_growth else 1


def _cmd_pullback(args) -> int:
    cfg = _load_config(args.config)
    results = []
    for seed in range(int(cfg.get("trials", 5))):
        for q in cfg.get("q_list", [1.2, 1.5]):
            for eps in cfg.get("eps_list", [0.1, 0.5]):
                results.append(experiments.pullback_check(
                    float(q), float(eps),
                    s_interval=tuple(cfg.get("s_interval", (0.5, 1.5))),
                    t_interval=tuple(cfg.get("t_interval", (-0.25, 0.75))),
                    seed=seed))
    all_ok = all(r.boundary_ok and r.gradient_ok for r in results)
    payload = {"trials": [r.as_dict() for r in results], "all_pass": all_ok,
               "csv_columns": ["q", "eps", "boundary_ok", "gradient_ok",
                               "min_margin"]}
    _write_report(payload, args.out, config=cfg)
    _write_csv(args.csv, payload["csv_columns"],
               [[r.q, r.eps, int(r.boundary_ok), int(r.gradient_ok),
                 min(r.margins.values())] for r in results])
    print(f"pullback: {sum(r.boundary_ok and r.gradient_ok for r in results)}"
          f"/{len(results)} sandwiches hold")
    return 0 if all_ok else 1


def _cmd_window(args) -> int:
    cfg = _load_config(args.config)
    res = experiments.neumann_window(
        float(cfg.get("q", 1.5)), cfg.get("eps_list", [0.2, 0.1, 0.05, 0.025]),
        window=tuple(cfg.get("window", (1.0, 2.0))),
        ell=float(cfg.get("ell", 1.0)))
    payload = dict(res.as_dict(), csv_columns=["eps", "lambda1", "c"])
    _write_report(payload, args.out, config=cfg)
    _write_csv(args.csv, ["eps", "lambda1", "c"],
               list(zip(res.eps_list, res.lambda1, res.c_values)))
    print(f"window: c values {[round(c, 4) for c in res.c_values]}, "
          f"spread {res.spread:.3f}")
    return 0 if res.spread <= 3.0 else 1


def _cmd_compare(args) -> int:
    cfg = _load_config(args.config)
    sections = [CrossSection.from_json(s) for s in cfg["sections"]]
    lam = cfg.get("lambda_L1")
    if lam is None:
        lam = sturm1d.lambda_L1(int(cfg.get("j", 1)), float(cfg.get("q", 1.5)),
                                int(cfg.get("d", 2)),
                                float(cfg.get("lambda_L1_tol", 1e-4))).value
    rep = experiments.isoperimetric_compare(sections, float(cfg.get("q", 1.5)),
                                            int(cfg.get("j", 1)), lam)
    payload = dict(rep.as_dict(), csv_columns=["kind", "coefficient"])
    _write_report(payload, args.out, config=cfg)
    _write_csv(args.csv, ["kind", "coefficient"],
               list(zip(rep.kinds, rep.coefficients)))
    print(f"compare: coefficients {[round(c, 6) for c in rep.coefficients]}, "
          f"ball least negative: {rep.ball_is_least_negative}")
    return 0 if rep.ball_is_least_negative else 1


def _cmd_reproduce(args) -> int:
    indices = None
    if args.criteria:
        indices = sorted({int(tok) for tok in args.criteria.split(",")})
    results = acceptance.run_all(indices)
    width = max(len(r.name) for r in results)
    print(f"{'criterion':>9}  {'name':<{width}}  {'status':<6}  time")
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.index:>9}  {r.name:<{width}}  {status:<6}  {r.elapsed:7.1f}s")
        print(f"           {r.detail}")
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} criteria passed")
    if args.out:
        payload = {"results": [{"index": r.index, "name": r.name,
                                "passed": r.passed, "detail": r.detail}
                               for r in results],
                   "all_passed": n_pass == len(results)}
        _write_report(payload, args.out)
    return 0 if n_pass == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robinpeaks",
        description="Robin eigenvalues on peaked domains: solvers and checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lambda1d", help="effective-operator eigenvalue ladder")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--a0", type=float, default=10.0)
    p.add_argument("--n0", type=int, default=2048)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_lambda1d)

    p = sub.add_parser("xsection", help="interval Robin eigenvalues")
    p.add_argument("--length", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_xsection)

    p = sub.add_parser("mesh", help="build and export a peak mesh")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--length", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--smin", type=float, required=True)
    p.add_argument("--ns", type=int, required=True)
    p.add_argument("--nt", type=int, required=True)
    p.add_argument("--grading", type=float, default=2.0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_mesh)

    for name, fn, help_text in (
            ("sweep", _cmd_sweep, "alpha sweep over the model peak"),
            ("fit", _cmd_fit, "power-law fit of a sweep (or synthetic data)"),
            ("agmon", _cmd_agmon, "exponential localization ratios"),
            ("pullback", _cmd_pullback, "change-of-variables sandwich checks"),
            ("window", _cmd_window, "window lower-bound constant"),
            ("compare", _cmd_compare, "isoperimetric coefficient comparison")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default=None, help="JSON report path")
        p.add_argument("--csv", default=None, help="flat CSV path")
        p.set_defaults(fn=fn)

    p = sub.add_parser("reproduce", help="run the acceptance criteria")
    p.add_argument("--criteria", default=None,
                   help="comma-separated criterion indices (default: all)")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "detail": str(exc)}) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
