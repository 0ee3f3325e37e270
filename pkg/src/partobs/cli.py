"""Command-line front end: ``estimate``, ``simulate``, ``validate`` and ``inspect``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 estimation
infeasible (window or zero denominator), 5 validation tolerance failure.
The ``PARTOBS_N_JOBS`` environment variable overrides ``--n-jobs``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bernoulli import (
    estimate_alpha,
    estimate_theta_gamma,
    fit_debiased,
    fit_debiased_at,
    fit_discrete_mle,
    fit_kernel,
    fit_kernel_grid,
    invert_monotone,
    monotonize,
)
from .censored import (
    dt_censoring_survival,
    dt_conditional_cdf,
    dt_truncation_cdf,
    ltrc_conditional_survival,
    ltrc_marginal_survival,
    rt_censoring_survival,
    rt_conditional_cdf,
)
from .current_status import fit_current_status, regression_mean_interval
from .errors import (
    ConfigurationError,
    DataError,
    DegenerateInputError,
    InfeasibleDesignError,
    NotEstimableError,
)
from .io import SCHEMAS, Dataset, config_hash, fmt, ingest, schema_text, write_dataset, write_manifest, write_table
from .kernels import RATE_WINDOW, Bandwidth, Kernel, as_bandwidth, default_bandwidth, evaluation_window
from .quantiles import quantile_in_x
from .simulation import BINARY_DESIGNS, DESIGNS, PRESETS, monte_carlo, pointwise, preset, simulate_design
from .step import ConditionalCdfEstimate, StepDistribution
from .truncated import conditional_cdf, marginal_survival_Y, truncation_cdf_T

N_JOBS_ENV = "PARTOBS_N_JOBS"
EXIT_CONFIG, EXIT_DATA, EXIT_INFEASIBLE, EXIT_VALIDATION = 2, 3, 4, 5


class WindowError(NotEstimableError):
    """Requested grid leaves the evaluation window."""


@dataclass
class RunConfig:
    design: str
    kernel: str = "epanechnikov"
    bandwidth: float | None = None
    exponent: float = 0.25
    grid_size: int = 21
    grid_lo: float | None = None
    grid_hi: float | None = None
    y_grid_size: int = 21
    theta: float | None = None
    quantiles: list[float] = field(default_factory=lambda: [0.25, 0.5, 0.75])
    direction: str = "decreasing"
    discrete: bool = False
    seed: int = 0
    notes: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if self.design not in DESIGNS:
            raise ConfigurationError(f"unknown design {self.design!r}")
        Kernel(self.kernel)
        if self.bandwidth is not None:
            as_bandwidth(self.bandwidth)
        if not RATE_WINDOW[0] < self.exponent < RATE_WINDOW[1]:
            self.notes.append(f"bandwidth exponent {self.exponent} outside (1/5, 1/3): rate conditions not met")
        if self.grid_size < 0 or self.y_grid_size < 0:
            raise ConfigurationError("grid sizes must be nonnegative")
        if any(not 0.0 < u < 1.0 for u in self.quantiles):
            raise ConfigurationError("quantile levels must lie in (0, 1)")
        if self.theta is not None and not self.theta > 0:
            raise ConfigurationError("theta must be positive")
        if self.direction not in ("increasing", "decreasing"):
            raise ConfigurationError(f"unknown direction {self.direction!r}")
        if self.design == "case_control" and self.theta is None:
            raise ConfigurationError("case_control estimation needs --theta (it is not identifiable)")


def _bandwidth(cfg: RunConfig, xs) -> Bandwidth:
    if cfg.bandwidth is not None:
        return Bandwidth(cfg.bandwidth, "fixed")
    return default_bandwidth(xs, a=cfg.exponent, check_rate=False)


def _x_grid(cfg: RunConfig, window) -> np.ndarray:
    if cfg.grid_size == 0:
        return np.empty(0)
    lo = window[0] if cfg.grid_lo is None else cfg.grid_lo
    hi = window[1] if cfg.grid_hi is None else cfg.grid_hi
    for g in (lo, hi):
        if not window[0] <= g <= window[1]:
            raise WindowError(f"grid point {g:g} outside the evaluation window [{window[0]:g}, {window[1]:g}]")
    return np.linspace(lo, hi, cfg.grid_size) if cfg.grid_size > 1 else np.array([lo])


def _y_grid(values, size) -> np.ndarray:
    if size == 0:
        return np.empty(0)
    return np.unique(np.quantile(values, np.linspace(0.05, 0.95, size)))


# -- estimator dispatch ----------------------------------------------------------


def conditional_slicer(design: str, sample, kernel: Kernel, h):
    """Map ``x -> StepDistribution`` estimating ``F_{Y|X}(.; x)`` for a continuous design."""
    if design == "left_truncated":
        return lambda x, wc=True: conditional_cdf(sample, kernel, h, x, wc)
    if design == "ltrc":
        return lambda x, wc=True: ltrc_conditional_survival(sample, kernel, h, x, wc)
    if design == "right_truncated":
        return lambda x, wc=True: rt_conditional_cdf(sample, kernel, h, x, wc)
    if design == "double_truncated":
        fc = dt_censoring_survival(sample)
        return lambda x, wc=True: dt_conditional_cdf(sample, kernel, h, x, fc=fc, window_check=wc)
    if design == "current_status":
        return lambda x, wc=True: fit_current_status(sample, kernel, h, x, wc)
    raise ConfigurationError(f"no conditional distribution estimator for design {design!r}")


def mean_at(design: str, sample, kernel: Kernel, h, x: float, slicer=None) -> float:
    if design == "current_status":
        return regression_mean_interval(sample, kernel, h, x)
    dist = (slicer or conditional_slicer(design, sample, kernel, h))(x)
    if not len(dist):
        raise NotEstimableError(f"no event carries kernel weight at x={x:g}")
    return dist.mean()


def _response(design: str, cols: dict) -> np.ndarray:
    return cols["z"] if design == "ltrc" else cols["c"] if design == "current_status" else cols["y"]


def _estimate_binary(ds: Dataset, cfg: RunConfig, kernel, h, grid, rows, info):
    sample = ds.sample()
    theta = cfg.theta if ds.design == "case_control" else 1.0
    if cfg.discrete:
        fit = fit_discrete_mle(sample) if theta == 1.0 else fit_debiased(sample, theta)
    elif grid.size == 0:
        fit = None
    elif ds.design == "case_control":
        fit = fit_debiased(sample, theta, kernel, h, grid)
    else:
        fit = fit_kernel_grid(sample, kernel, h, grid)
    if fit is not None:
        rows += [("p", g, "", "", v) for g, v in zip(fit.grid, fit.values)]
        mono = monotonize(fit, "increasing" if cfg.direction == "increasing" else "decreasing")
        rows += [("p_monotone", g, "", "", v) for g, v in zip(mono.grid, mono.values)]
        for u in cfg.quantiles:
            q = invert_monotone(mono, u, cfg.direction)
            rows.append(("q_p", "", "", u, q.value))
            if q.boundary:
                info["boundary_quantiles"].append(u)
    if ds.design == "case_control" and not cfg.discrete:
        for g in grid:
            rows.append(("alpha", g, "", "", estimate_alpha(sample, g, kernel, h)))
    tg = estimate_theta_gamma(sample)
    rows.append(("theta_gamma", "", "", "", tg))
    if ds.design == "x_truncated" and cfg.theta is not None:
        rows.append(("gamma", "", "", "", tg / cfg.theta))


def _marginal_rows(ds: Dataset, ygrid, rows):
    s = ds.sample()
    extra: list[tuple[str, StepDistribution, np.ndarray, bool]] = []
    if ds.design == "left_truncated":
        extra += [("F_Y", marginal_survival_Y(s), ygrid, False), ("F_T", truncation_cdf_T(s), _y_grid(s.t, len(ygrid)), True)]
    elif ds.design == "ltrc":
        extra.append(("F_Y", ltrc_marginal_survival(s), ygrid, False))
    elif ds.design == "right_truncated":
        extra.append(("F_C", rt_censoring_survival(s), _y_grid(s.c, len(ygrid)), False))
    elif ds.design == "double_truncated":
        extra += [
            ("F_C", dt_censoring_survival(s), _y_grid(s.c, len(ygrid)), False),
            ("F_T", dt_truncation_cdf(s), _y_grid(s.t, len(ygrid)), True),
        ]
    for name, dist, pts, is_cdf in extra:
        vals = dist.cdf(pts) if is_cdf else 1.0 - dist.survival(pts)
        rows += [(name, "", p, "", v) for p, v in zip(pts, np.atleast_1d(vals))]


def run_estimate(ds: Dataset, cfg: RunConfig, out: Path) -> dict:
    """Estimate every quantity of the design on the configured grid.

    Writes ``estimates.csv`` (long format) and ``manifest.json`` to ``out``;
    an empty covariate grid writes the manifest only.
    """
    cfg.validate()
    if ds.design != cfg.design:
        raise ConfigurationError(f"dataset design {ds.design!r} does not match --design {cfg.design!r}")
    out.mkdir(parents=True, exist_ok=True)
    kernel = Kernel(cfg.kernel)
    xs = ds.columns["x"] if ds.design != "case_control" else ds.columns["x"][ds.columns["s"] == 1]
    bw = _bandwidth(cfg, xs)
    window = evaluation_window(xs, bw)
    grid = _x_grid(cfg, window)
    rows: list[tuple] = []
    info: dict = {"skipped": [], "defect": {}, "clipped": {}, "boundary_quantiles": []}
    if grid.size == 0 and not cfg.discrete:
        pass
    elif ds.design in BINARY_DESIGNS:
        _estimate_binary(ds, cfg, kernel, bw, grid, rows, info)
    else:
        sample = ds.sample()
        slicer = conditional_slicer(ds.design, sample, kernel, bw)
        ygrid = _y_grid(_response(ds.design, ds.columns), cfg.y_grid_size)
        slices: dict[float, StepDistribution] = {}
        for g in grid:
            try:
                dist = slicer(g)
            except NotEstimableError as exc:
                info["skipped"].append({"x": g, "reason": str(exc)})
                continue
            slices[float(g)] = dist
            info["defect"][fmt(g)] = dist.defect if len(dist) else 1.0
            if "clipped" in dist.notes:
                info["clipped"][fmt(g)] = dist.notes["clipped"]
            rows += [("F", g, y, "", v) for y, v in zip(ygrid, np.atleast_1d(dist.cdf(ygrid)))]
            try:
                rows.append(("m", g, "", "", mean_at(ds.design, sample, kernel, bw, g, slicer)))
            except NotEstimableError as exc:
                info["skipped"].append({"x": g, "quantity": "m", "reason": str(exc)})
            if len(dist):
                for u in cfg.quantiles:
                    q = dist.quantile(u)
                    rows.append(("q_y", g, "", u, q.value))
        if slices and ygrid.size:
            est = ConditionalCdfEstimate(lambda x: slices.get(float(x)) or slicer(x), window)
            y_mid = float(np.median(ygrid))
            for u in cfg.quantiles:
                q = quantile_in_x(est, u, y_mid, grid, cfg.direction, monotonize=True)
                rows.append(("q_x", "", y_mid, u, q.value))
        _marginal_rows(ds, ygrid, rows)
    if grid.size or cfg.discrete:
        write_table(out / "estimates.csv", ["quantity", "x", "y", "u", "value"], rows)
    manifest = {
        "version": __version__,
        "command": "estimate",
        "design": ds.design,
        "seed": cfg.seed,
        "config": asdict(cfg),
        "config_hash": config_hash(asdict(cfg)),
        "bandwidth": {"h": bw.h, "rule": bw.rule},
        "window": list(window),
        "n_records": len(ds),
        "rejects": {"count": len(ds.rejects), "lines": [r[0] for r in ds.rejects[:1000]]},
        **info,
    }
    write_manifest(out / "manifest.json", manifest)
    return manifest


def run_simulate(designs: list[str], preset_name: str | None, n: int, seed: int, out: Path) -> dict:
    """Write one simulated dataset CSV per design plus a manifest."""
    out.mkdir(parents=True, exist_ok=True)
    record = {}
    for k, design in enumerate(designs):
        truth = preset(preset_name or design)
        child = np.random.SeedSequence(seed).spawn(len(designs))[k]
        sim = simulate_design(truth, design, n, child)
        write_dataset(out / f"{design}.csv", design, sim.sample)
        record[design] = {"n": n, "acceptance_rate": sim.acceptance_rate, "n_raw": sim.n_raw}
    cfg = {"designs": designs, "preset": preset_name, "n": n, "seed": seed}
    manifest = {"version": __version__, "command": "simulate", "seed": seed, "config": cfg,
                "config_hash": config_hash(cfg), "datasets": record}
    write_manifest(out / "manifest.json", manifest)
    return manifest


def _validation_binding(design, quantity, truth, kernel, cfg, y):
    def bw(sample):
        xs = sample.sampled().x if design in BINARY_DESIGNS else sample.x
        return _bandwidth(cfg, xs)

    if design in BINARY_DESIGNS:
        if quantity != "p":
            raise ConfigurationError(f"quantity {quantity!r} not available for {design}")
        if design == "case_control":
            return pointwise(lambda s, x: fit_debiased_at(s, truth.theta, kernel, bw(s), x))
        return pointwise(lambda s, x: fit_kernel(s, kernel, bw(s), x))
    if quantity == "m":
        return pointwise(lambda s, x: mean_at(design, s, kernel, bw(s), x))
    if quantity == "F":
        return pointwise(lambda s, x: float(conditional_slicer(design, s, kernel, bw(s))(x).cdf(y)))
    raise ConfigurationError(f"quantity {quantity!r} not available for {design}")


def run_validate(design, preset_name, quantity, n, reps, seed, tolerance, cfg: RunConfig, out: Path, n_jobs=1, y=None):
    """Monte Carlo check of one estimator; returns (manifest, passed)."""
    truth = preset(preset_name or design)
    kernel = Kernel(cfg.kernel)
    if quantity is None:
        quantity = "p" if design in BINARY_DESIGNS else "m"
    grid = truth.x_dist.ppf(np.linspace(0.3, 0.7, max(cfg.grid_size, 1)))
    if y is None and quantity == "F":
        y = float(np.median([truth.m(g) for g in grid]))
    if quantity == "p":
        target = np.asarray(truth.p(grid), float)
    elif quantity == "m":
        target = np.array([float(truth.m(g)) for g in grid])
    else:
        target = np.array([float(truth.F(y, g)) for g in grid])
    estimator = _validation_binding(design, quantity, truth, kernel, cfg, y)
    report = monte_carlo(truth, design, estimator, grid, n, reps, seed, target, ("x",), n_jobs)
    out.mkdir(parents=True, exist_ok=True)
    report.to_csv(out / "report.csv")
    worst = float(np.nanmax(report.rmse)) if np.any(np.isfinite(report.rmse)) else float("inf")
    fail_frac = float(np.max(report.failures) / reps)
    passed = worst <= tolerance and fail_frac <= 0.1
    conf = {"design": design, "preset": preset_name, "quantity": quantity, "y": y, "n": n, "reps": reps,
            "seed": seed, "tolerance": tolerance, "kernel": cfg.kernel, "bandwidth": cfg.bandwidth,
            "exponent": cfg.exponent, "grid_size": cfg.grid_size}
    manifest = {"version": __version__, "command": "validate", "seed": seed, "config": conf,
                "config_hash": config_hash(conf), "max_rmse": worst, "max_failure_fraction": fail_frac,
                "acceptance_rate": report.acceptance_rate, "passed": passed}
    write_manifest(out / "summary.json", manifest)
    return manifest, passed


def run_inspect(ds: Dataset, cfg: RunConfig) -> dict:
    cols = {c: {"min": float(v.min()), "max": float(v.max()), "mean": float(v.mean())} for c, v in ds.columns.items()}
    summary = {"design": ds.design, "source": ds.source, "n_records": len(ds), "rejected": len(ds.rejects),
               "reject_log": [{"line": ln, "reason": r} for ln, r in ds.rejects[:50]], "columns": cols,
               "design_check": "all retained rows satisfy " + schema_text(ds.design)}
    if "delta" in ds.columns:
        summary["event_fraction"] = float(ds.columns["delta"].mean())
    try:
        bw = _bandwidth(cfg, ds.columns["x"])
        summary["bandwidth"] = bw.h
        summary["window"] = list(evaluation_window(ds.columns["x"], bw))
    except (ConfigurationError, DegenerateInputError) as exc:
        summary["window"] = f"unavailable: {exc}"
    return summary


# -- argument parsing ---------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--kernel", default="epanechnikov", choices=["epanechnikov", "triangular", "gaussian", "uniform"])
    p.add_argument("--bandwidth", type=float, help="fixed bandwidth h (default: 1.06 sd n^-a)")
    p.add_argument("--exponent", type=float, default=0.25, help="rate exponent a of the default bandwidth")
    p.add_argument("--grid-size", type=int, default=21, help="number of covariate grid points")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    schemas = "\n".join("  " + schema_text(d) for d in SCHEMAS)
    parser = argparse.ArgumentParser(
        prog="partobs",
        description="Nonparametric regression under truncation, censoring and bias sampling.",
        epilog="CSV schemas (comma-delimited, header row, UTF-8):\n" + schemas,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate on a dataset", epilog=schemas,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    est.add_argument("--data", required=True)
    est.add_argument("--design", required=True, choices=DESIGNS)
    est.add_argument("--out", required=True, help="output directory")
    _common(est)
    est.add_argument("--grid-lo", type=float)
    est.add_argument("--grid-hi", type=float)
    est.add_argument("--y-grid-size", type=int, default=21)
    est.add_argument("--theta", type=float)
    est.add_argument("--quantiles", type=float, nargs="*", default=[0.25, 0.5, 0.75])
    est.add_argument("--direction", choices=["increasing", "decreasing"], default="decreasing")
    est.add_argument("--discrete", action="store_true", help="cell estimators for a discrete covariate")

    sim = sub.add_parser("simulate", help="write simulated datasets")
    sim.add_argument("--design", required=True, nargs="+", choices=list(DESIGNS) + ["all"])
    sim.add_argument("--preset", choices=PRESETS)
    sim.add_argument("--n", type=int, default=1000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True, help="output directory")

    val = sub.add_parser("validate", help="Monte Carlo check against the model truth")
    val.add_argument("--design", required=True, choices=DESIGNS)
    val.add_argument("--preset", choices=PRESETS)
    val.add_argument("--quantity", choices=["m", "F", "p"])
    val.add_argument("--y", type=float, help="response level for --quantity F")
    val.add_argument("--n", type=int, default=500)
    val.add_argument("--reps", type=int, default=20)
    val.add_argument("--tolerance", type=float, default=0.15)
    val.add_argument("--n-jobs", type=int, default=1)
    val.add_argument("--out", required=True, help="output directory")
    _common(val)
    val.set_defaults(grid_size=5)

    ins = sub.add_parser("inspect", help="summarise a dataset and check its design")
    ins.add_argument("--data", required=True)
    ins.add_argument("--design", required=True, choices=DESIGNS)
    _common(ins)
    return parser


def _dispatch(args) -> int:
    if args.command == "estimate":
        cfg = RunConfig(args.design, args.kernel, args.bandwidth, args.exponent, args.grid_size, args.grid_lo,
                        args.grid_hi, args.y_grid_size, args.theta, list(args.quantiles), args.direction,
                        args.discrete, args.seed)
        cfg.validate()
        ds = ingest(args.data, args.design)
        manifest = run_estimate(ds, cfg, Path(args.out))
        for note in cfg.notes:
            print(f"warning: {note}", file=sys.stderr)
        print(f"{manifest['n_records']} records, {manifest['rejects']['count']} rejected; wrote {args.out}")
        return 0
    if args.command == "simulate":
        if args.n < 1:
            raise ConfigurationError("--n must be positive")
        designs = list(DESIGNS) if "all" in args.design else list(dict.fromkeys(args.design))
        run_simulate(designs, args.preset, args.n, args.seed, Path(args.out))
        print(f"wrote {len(designs)} dataset(s) to {args.out}")
        return 0
    if args.command == "validate":
        cfg = RunConfig(args.design, args.kernel, args.bandwidth, args.exponent, args.grid_size, seed=args.seed)
        Kernel(cfg.kernel)
        n_jobs = int(os.environ.get(N_JOBS_ENV, args.n_jobs))
        manifest, passed = run_validate(args.design, args.preset, args.quantity, args.n, args.reps, args.seed,
                                        args.tolerance, cfg, Path(args.out), n_jobs, args.y)
        status = "PASS" if passed else "FAIL"
        print(f"{status} max rmse {manifest['max_rmse']:.4g} (tolerance {args.tolerance:g})")
        return 0 if passed else EXIT_VALIDATION
    if args.command == "inspect":
        cfg = RunConfig(args.design, args.kernel, args.bandwidth, args.exponent, args.grid_size)
        print(json.dumps(run_inspect(ingest(args.data, args.design), cfg), indent=2))
        return 0
    raise ConfigurationError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        return _dispatch(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, DegenerateInputError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NotEstimableError, InfeasibleDesignError) as exc:
        print(f"estimation infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
