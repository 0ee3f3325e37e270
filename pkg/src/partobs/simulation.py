"""Generative models, quadrature oracles and a Monte Carlo harness.

A :class:`DesignTruth` bundles the regression function, error law and the
covariate/truncation/censoring laws (scipy frozen distributions).  For each
observation design the module can simulate records by rejection sampling
and compute the population targets the estimators converge to.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special, stats

from .bernoulli import BinarySample
from .censored import DoublyTruncatedSample, LtrcSample, RightTruncatedSample
from .current_status import CurrentStatusSample
from .errors import ConfigurationError, InfeasibleDesignError, PartObsError
from .kernels import Kernel, as_bandwidth
from .truncated import LeftTruncatedSample

DESIGNS = (
    "plain",
    "case_control",
    "x_truncated",
    "left_truncated",
    "ltrc",
    "right_truncated",
    "double_truncated",
    "current_status",
)
BINARY_DESIGNS = ("plain", "case_control", "x_truncated")

QUAD_TOL = 1e-8
# lower quantile of Y | X=x that the truncation law must reach
SUPPORT_LEVEL = 1e-4
_TAIL = 1e-14
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(200)


@dataclass
class DesignTruth:
    """Population model for simulation and oracle computations.

    Continuous designs use ``Y = m(X) + eps``; binary designs draw
    ``Y ~ Bernoulli(p(X))``.  A missing ``t_dist`` means no left
    truncation (``T = -inf``); a missing ``c_dist`` means ``C = +inf``.
    """

    x_dist: object
    m: Callable | None = None
    eps: object | None = None
    t_dist: object | None = None
    c_dist: object | None = None
    p: Callable | None = None
    lambda0: float | None = None
    lambda1: float | None = None
    trunc_interval: tuple[float, float] | None = None
    check_mean: bool = True

    def __post_init__(self):
        if self.eps is not None and self.check_mean:
            mu, var = float(self.eps.mean()), float(self.eps.var())
            if abs(mu) > 1e-8:
                raise ConfigurationError(f"error law must have mean zero, got {mu:g}")
            if not math.isfinite(var):
                raise ConfigurationError("error law must have finite variance")

    @property
    def theta(self) -> float | None:
        if self.lambda0 is None or self.lambda1 is None:
            return None
        return self.lambda0 / self.lambda1

    # -- pieces of the conditional law -------------------------------------

    def F(self, y, x):
        return self.eps.cdf(np.asarray(y) - self.m(x))

    def Fbar(self, y, x):
        return self.eps.sf(np.asarray(y) - self.m(x))

    def f(self, y, x):
        return self.eps.pdf(np.asarray(y) - self.m(x))

    def FT(self, v):
        return np.ones_like(np.asarray(v, float)) if self.t_dist is None else self.t_dist.cdf(v)

    def SC(self, v):
        """``P(C >= v)``."""
        return np.ones_like(np.asarray(v, float)) if self.c_dist is None else self.c_dist.sf(v)

    def y_range(self, x) -> tuple[float, float]:
        mx = float(self.m(x))
        return mx + float(self.eps.ppf(_TAIL)), mx + float(self.eps.ppf(1 - _TAIL))

    def support_violations(self, xs) -> list[float]:
        """Covariate points where ``T`` has no mass below the bulk of ``Y | X = x``."""
        if self.t_dist is None or self.eps is None:
            return []
        bad = []
        for x in xs:
            lo = float(self.m(x)) + float(self.eps.ppf(SUPPORT_LEVEL))
            if not float(self.t_dist.cdf(lo)) > 0:
                bad.append(float(x))
        return bad

    def marginal_pdf_Y(self, v):
        """Density of ``Y`` integrated over ``F_X`` (Gauss-Legendre on the quantile scale)."""
        v = np.atleast_1d(np.asarray(v, float))
        p = 0.5 * (_GL_NODES + 1.0)
        xs = self.x_dist.ppf(p)
        mx = np.array([self.m(x) for x in xs])
        vals = self.eps.pdf(v[:, None] - mx[None, :])
        return 0.5 * vals @ _GL_WEIGHTS


def _quad(fun, lo, hi, points=None) -> float:
    if not hi > lo:
        return 0.0
    pts = None
    if points is not None:
        pts = [p for p in points if lo < p < hi] or None
    return integrate.quad(fun, lo, hi, epsabs=QUAD_TOL * 1e-2, epsrel=1e-10, limit=400, points=pts)[0]


def _dist_range(dist) -> tuple[float, float]:
    return float(dist.ppf(_TAIL)), float(dist.ppf(1 - _TAIL))


def _kinks(truth) -> list[float]:
    pts = []
    for d in (truth.t_dist, truth.c_dist):
        if d is not None:
            pts.extend(v for v in d.support() if math.isfinite(v))
    return pts


@dataclass
class OracleValues:
    alpha: float
    A: float | None = None
    B: float | None = None
    extra: dict = field(default_factory=dict)


def _require(truth, *names):
    for n in names:
        if getattr(truth, n) is None:
            raise ConfigurationError(f"design needs truth.{n}")


def oracle_alpha_A_B(truth: DesignTruth, design: str, y: float, x: float) -> OracleValues:
    """Population values of the observation probability and the A/B functionals.

    ``alpha`` is the probability that a draw at ``X = x`` is observed;
    ``A`` and ``B`` are the sub-distribution and risk function that the
    kernel estimators target.  Double truncation also returns ``H`` (the
    unnormalised ``int_y^inf Fbar_C dF``) and the marginal ``A'``, ``B'``,
    ``B''`` in ``extra``; right truncation returns ``A'``.
    """
    if design in BINARY_DESIGNS:
        _require(truth, "p")
        p = float(truth.p(x))
        theta = truth.theta if design == "case_control" else 1.0
        if design == "case_control" and theta is None:
            raise ConfigurationError("case-control design needs lambda0 and lambda1")
        alpha = theta * (1 - p) / p if p > 0 else math.inf
        return OracleValues(alpha, extra={"p": p, "pi": 1.0 / (1.0 + alpha)})
    _require(truth, "m", "eps")
    lo, hi = truth.y_range(x)
    kinks = _kinks(truth)
    f = lambda v: float(truth.f(v, x))  # noqa: E731
    FT, SC = truth.FT, truth.SC

    if design == "left_truncated":
        alpha = _quad(lambda v: FT(v) * f(v), lo, hi, kinks)
        A = _quad(lambda v: FT(v) * f(v), lo, min(y, hi), kinks) / alpha
        B = float(FT(y) * truth.Fbar(y, x)) / alpha
        return OracleValues(alpha, A, B)
    if design == "ltrc":
        def fz(v):
            out = f(v) * SC(v)
            if truth.c_dist is not None:
                out += truth.c_dist.pdf(v) * truth.Fbar(v, x)
            return out

        zlo = lo if truth.c_dist is None else min(lo, _dist_range(truth.c_dist)[0])
        alpha = _quad(lambda v: FT(v) * fz(v), zlo, hi, kinks)
        A = _quad(lambda v: FT(v) * SC(v) * f(v), lo, min(y, hi), kinks) / alpha
        B = float(FT(y) * SC(y) * truth.Fbar(y, x)) / alpha
        return OracleValues(alpha, A, B)
    if design == "right_truncated":
        alpha = _quad(lambda v: SC(v) * f(v), lo, hi, kinks)
        A = _quad(lambda v: SC(v) * f(v), lo, min(y, hi), kinks) / alpha
        B = float(SC(y) * truth.F(y, x)) / alpha
        extra = {}
        if truth.c_dist is not None:
            clo, _ = _dist_range(truth.c_dist)
            extra["A_prime"] = _quad(
                lambda v: float(truth.F(v, x)) * truth.c_dist.pdf(v), clo, y, kinks
            ) / alpha
        return OracleValues(alpha, A, B, extra)
    if design == "double_truncated":
        w = lambda v: FT(v) * SC(v) * f(v)  # noqa: E731
        alpha = _quad(w, lo, hi, kinks)
        A = _quad(w, lo, min(y, hi), kinks) / alpha
        H = _quad(lambda v: SC(v) * f(v), max(y, lo), hi, kinks)
        B = float(FT(y)) * H / alpha
        extra = {"H": H, **_dt_marginals(truth, y)}
        return OracleValues(alpha, A, B, extra)
    if design == "current_status":
        _require(truth, "c_dist")
        clo, _ = _dist_range(truth.c_dist)
        Bcs = _quad(lambda s: float(truth.F(s, x)) * truth.c_dist.pdf(s), clo, y, kinks)
        return OracleValues(1.0, float(truth.F(y, x)), Bcs)
    raise ConfigurationError(f"unknown design {design!r}")


def _marginal_y_range(truth):
    xs = truth.x_dist.ppf([1e-9, 1 - 1e-9])
    ms = [truth.m(x) for x in np.linspace(xs[0], xs[1], 41)]
    return min(ms) + float(truth.eps.ppf(_TAIL)), max(ms) + float(truth.eps.ppf(1 - _TAIL))


def _dt_marginals(truth, y) -> dict:
    """Marginal ``A'(y) = P(y <= T | obs)``, ``B'(y) = P(Y <= y <= C | obs)``, ``B''(y) = P(C <= y | obs)``."""
    lo, hi = _marginal_y_range(truth)
    kinks = _kinks(truth)
    fy = lambda v: float(truth.marginal_pdf_Y(v)[0])  # noqa: E731
    FT, SC = truth.FT, truth.SC
    abar = _quad(lambda v: FT(v) * SC(v) * fy(v), lo, hi, kinks)
    G = lambda s: _quad(lambda v: FT(v) * fy(v), lo, min(s, hi), kinks)  # noqa: E731
    out = {"alpha_marginal": abar, "B_prime": float(SC(y)) * G(y) / abar}
    if truth.t_dist is not None:
        tlo, thi = _dist_range(truth.t_dist)
        inner = lambda t: _quad(lambda v: SC(v) * fy(v), max(t, lo), hi, kinks)  # noqa: E731
        out["A_prime"] = _quad(lambda t: truth.t_dist.pdf(t) * inner(t), max(y, tlo), thi, kinks) / abar
    if truth.c_dist is not None:
        clo, chi = _dist_range(truth.c_dist)
        out["B_second"] = _quad(lambda s: truth.c_dist.pdf(s) * G(s), clo, min(y, chi), kinks) / abar
    return out


def oracle_apparent_mean(truth: DesignTruth, x: float) -> float:
    """``m*(x) = E(Y | X = x, T <= Y)``, the mean a naive smoother converges to."""
    _require(truth, "m", "eps")
    lo, hi = truth.y_range(x)
    kinks = _kinks(truth)
    num = _quad(lambda v: v * truth.FT(v) * truth.f(v, x), lo, hi, kinks)
    den = _quad(lambda v: truth.FT(v) * truth.f(v, x), lo, hi, kinks)
    return num / den


def truncation_lambdas(truth: DesignTruth) -> tuple[float, float, float]:
    """Sampling probabilities ``(lambda0, lambda1, theta)`` when ``X`` is seen only on ``[a, b]``."""
    _require(truth, "p", "trunc_interval")
    a, b = truth.trunc_interval
    lo, hi = truth.x_dist.support()
    if not math.isfinite(lo) or not math.isfinite(hi):
        lo, hi = _dist_range(truth.x_dist)
    a, b = max(a, lo), min(b, hi)
    fx = truth.x_dist.pdf
    p = lambda x: float(truth.p(x))  # noqa: E731
    p_all = _quad(lambda x: p(x) * fx(x), lo, hi)
    p_in = _quad(lambda x: p(x) * fx(x), a, b)
    mass_in = _quad(fx, a, b)
    lam1 = p_in / p_all
    lam0 = (mass_in - p_in) / (1.0 - p_all)
    return lam0, lam1, lam0 / lam1


@dataclass
class TheoreticalMoments:
    """First-order bias and variance of the kernel estimators of ``A`` and ``B``."""

    bias_A: float
    bias_B: float
    var_A: float
    var_B: float
    alpha: float
    A: float
    B: float
    partials: dict = field(default_factory=dict)


def expected_alpha(truth: DesignTruth, design: str = "left_truncated") -> float:
    """``E alpha(X)``: overall acceptance probability of the design."""
    p = 0.5 * (_GL_NODES[::4] + 1.0)
    xs = truth.x_dist.ppf(p)
    vals = np.array([oracle_alpha_A_B(truth, design, 0.0, x).alpha for x in xs])
    return float(0.5 * vals @ _GL_WEIGHTS[::4] / (0.5 * _GL_WEIGHTS[::4].sum()))


def theoretical_moments(
    truth: DesignTruth,
    kernel: Kernel,
    n: float,
    h,
    y: float,
    x: float,
    n_observed: bool = False,
    step: float = 1e-3,
) -> TheoreticalMoments:
    """Leading bias (order ``h^2``) and variance (order ``1/(nh)``) of ``A_hat`` and ``B_hat``.

    ``n`` counts draws from the untruncated population; pass
    ``n_observed=True`` when it counts retained records, and it is then
    divided by ``E alpha(X)``.  Variances include the covariate density
    ``f_X(x)`` (equal to one for a uniform covariate on the unit
    interval).  Second derivatives in ``x`` use central differences with
    the given step, taken inside the ``v`` integral.
    """
    _require(truth, "m", "eps")
    hv = as_bandwidth(h)
    base = oracle_alpha_A_B(truth, "left_truncated", y, x)
    alpha, A, B = base.alpha, base.A, base.B
    n_raw = n / expected_alpha(truth) if n_observed else float(n)
    fx = float(truth.x_dist.pdf(x))

    def d2f(v):
        return (truth.f(v, x + step) - 2.0 * truth.f(v, x) + truth.f(v, x - step)) / step**2

    lo, hi = truth.y_range(x)
    lo -= 1.0
    hi += 1.0
    kinks = _kinks(truth)
    a2_y = _quad(lambda v: truth.FT(v) * d2f(v), lo, min(y, hi), kinks)
    a2_all = _quad(lambda v: truth.FT(v) * d2f(v), lo, hi, kinks)
    F2 = float((truth.F(y, x + step) - 2.0 * truth.F(y, x) + truth.F(y, x - step)) / step**2)
    F1 = float((truth.F(y, x + step) - truth.F(y, x - step)) / (2.0 * step))
    scale = hv**2 * kernel.kappa1 / (2.0 * alpha)
    bias_A = scale * (a2_y - A * a2_all)
    bias_B = scale * (-float(truth.FT(y)) * F2 - B * a2_all)
    denom = n_raw * hv * fx * alpha
    var_A = kernel.kappa2 * A * (1.0 - A) / denom
    var_B = kernel.kappa2 * B * (1.0 - B) / denom
    partials = {"dF_dx": F1, "d2F_dx2": F2, "dF_dy": float(truth.f(y, x)), "n_raw": n_raw}
    return TheoreticalMoments(bias_A, bias_B, var_A, var_B, alpha, A, B, partials)


# -- simulation --------------------------------------------------------------


@dataclass
class Simulated:
    sample: object
    acceptance_rate: float
    n_raw: int


def _raw_draw(truth: DesignTruth, design: str, size: int, rng):
    x = truth.x_dist.rvs(size=size, random_state=rng)
    if design in BINARY_DESIGNS:
        _require(truth, "p")
        y = (rng.random(size) < truth.p(x)).astype(float)
        if design == "case_control":
            if truth.theta is None:
                raise ConfigurationError("case-control design needs lambda0 and lambda1")
            lam = np.where(y == 1, truth.lambda1, truth.lambda0)
            s = (rng.random(size) < lam).astype(float)
            keep = s == 1
        elif design == "x_truncated":
            _require(truth, "trunc_interval")
            a, b = truth.trunc_interval
            keep = (x >= a) & (x <= b)
            s = keep.astype(float)
        else:
            keep = np.ones(size, bool)
            s = np.ones(size)
        return {"x": x, "y": y, "s": s}, keep
    _require(truth, "m", "eps")
    y = truth.m(x) + truth.eps.rvs(size=size, random_state=rng)
    t = (
        np.full(size, -np.inf)
        if truth.t_dist is None
        else truth.t_dist.rvs(size=size, random_state=rng)
    )
    c = (
        np.full(size, np.inf)
        if truth.c_dist is None
        else truth.c_dist.rvs(size=size, random_state=rng)
    )
    if design == "left_truncated":
        return {"x": x, "t": t, "y": y}, t <= y
    if design == "ltrc":
        z = np.minimum(y, c)
        return {"x": x, "t": t, "z": z, "delta": (y <= c).astype(float)}, t <= z
    if design == "right_truncated":
        return {"x": x, "y": y, "c": c}, y <= c
    if design == "double_truncated":
        return {"x": x, "t": t, "y": y, "c": c}, (t <= y) & (y <= c)
    if design == "current_status":
        _require(truth, "c_dist")
        return {"x": x, "c": c, "delta": (y <= c).astype(float)}, np.ones(size, bool)
    raise ConfigurationError(f"unknown design {design!r}")


def make_sample(design: str, cols: dict):
    """Build the sample container of ``design`` from named columns."""
    if design in BINARY_DESIGNS:
        return BinarySample(cols["x"], cols["y"], cols.get("s"))
    if design == "left_truncated":
        return LeftTruncatedSample(cols["x"], cols["t"], cols["y"])
    if design == "ltrc":
        return LtrcSample(cols["x"], cols["t"], cols["z"], cols["delta"])
    if design == "right_truncated":
        return RightTruncatedSample(cols["x"], cols["y"], cols["c"])
    if design == "double_truncated":
        return DoublyTruncatedSample(cols["x"], cols["t"], cols["y"], cols["c"])
    if design == "current_status":
        return CurrentStatusSample(cols["x"], cols["c"], cols["delta"])
    raise ConfigurationError(f"unknown design {design!r}")


PROBE_SIZE = 10_000
MIN_ACCEPTANCE = 1e-3


def simulate_design(truth: DesignTruth, design: str, n: int, seed) -> Simulated:
    """Draw until ``n`` records satisfy the design's sampling condition.

    ``seed`` is anything ``numpy.random.default_rng`` accepts.  The first
    batch is a probe of ``PROBE_SIZE`` draws; an acceptance rate below
    ``MIN_ACCEPTANCE`` raises :class:`InfeasibleDesignError`.  The
    reported acceptance rate uses every raw draw made.
    """
    if design not in DESIGNS:
        raise ConfigurationError(f"unknown design {design!r}")
    if n < 1:
        raise ConfigurationError("n must be positive")
    if design in ("left_truncated", "ltrc", "double_truncated"):
        xs = truth.x_dist.ppf(np.linspace(0.05, 0.95, 7))
        bad = truth.support_violations(xs)
        if bad:
            warnings.warn(f"truncation law has no mass below Y | X=x at x={bad}", stacklevel=2)
    rng = np.random.default_rng(seed)
    parts: list[dict] = []
    got = drawn = accepted = 0
    size = max(PROBE_SIZE, n)
    while got < n:
        cols, keep = _raw_draw(truth, design, size, rng)
        drawn += size
        k = int(keep.sum())
        accepted += k
        if drawn == size and accepted / drawn < MIN_ACCEPTANCE:
            raise InfeasibleDesignError(
                f"acceptance rate {accepted / drawn:.2e} below {MIN_ACCEPTANCE:g} in a {size}-draw probe"
            )
        parts.append({name: v[keep] for name, v in cols.items()})
        got += k
        rate = accepted / drawn
        size = max(1024, int(math.ceil(1.2 * (n - got) / rate)))
    merged = {name: np.concatenate([p[name] for p in parts])[:n] for name in parts[0]}
    return Simulated(make_sample(design, merged), accepted / drawn, drawn)


# -- Monte Carlo harness -------------------------------------------------------


@dataclass
class EstimatorReport:
    """Per-point Monte Carlo summaries of an estimator against its target."""

    grid: np.ndarray
    grid_names: tuple[str, ...]
    target: np.ndarray
    estimates: np.ndarray
    n: int
    reps: int
    seed: int
    acceptance_rate: float

    @property
    def failures(self) -> np.ndarray:
        return np.sum(~np.isfinite(self.estimates), axis=0)

    @property
    def mean(self) -> np.ndarray:
        return _quiet(np.nanmean, self.estimates, axis=0)

    @property
    def bias(self) -> np.ndarray:
        return self.mean - self.target

    @property
    def variance(self) -> np.ndarray:
        return _quiet(np.nanvar, self.estimates, axis=0, ddof=1)

    @property
    def rmse(self) -> np.ndarray:
        return np.sqrt(_quiet(np.nanmean, (self.estimates - self.target) ** 2, axis=0))

    @property
    def mean_abs_error(self) -> np.ndarray:
        return _quiet(np.nanmean, np.abs(self.estimates - self.target), axis=0)

    def rows(self) -> list[dict]:
        out = []
        g = self.grid.reshape(len(self.target), -1)
        for k in range(len(self.target)):
            row = {name: g[k, j] for j, name in enumerate(self.grid_names)}
            row.update(
                target=self.target[k],
                mean=self.mean[k],
                bias=self.bias[k],
                variance=self.variance[k],
                rmse=self.rmse[k],
                failures=int(self.failures[k]),
            )
            out.append(row)
        return out

    def to_csv(self, path) -> None:
        rows = self.rows()
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(list(rows[0]))
            for r in rows:
                writer.writerow([_fmt(v) for v in r.values()])


def _quiet(fn, *args, **kw):
    # grid points where every replication failed are NaN, not a warning
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return fn(*args, **kw)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def pointwise(fn: Callable[[object, object], float]) -> Callable[[object, Sequence], np.ndarray]:
    """Lift ``fn(sample, point)`` to a grid estimator that records failures as ``nan``."""

    def run(sample, grid):
        out = np.full(len(grid), np.nan)
        for k, pt in enumerate(grid):
            try:
                out[k] = fn(sample, pt)
            except (PartObsError, ArithmeticError, ValueError):
                pass
        return out

    return run


def _one_rep(truth, design, estimator, grid, n, child):
    sim = simulate_design(truth, design, n, child)
    try:
        est = np.asarray(estimator(sim.sample, grid), dtype=float)
    except (PartObsError, ArithmeticError, ValueError):
        est = np.full(len(grid), np.nan)
    return est, sim.acceptance_rate


def monte_carlo(
    truth: DesignTruth,
    design: str,
    estimator: Callable[[object, Sequence], Sequence[float]],
    grid,
    n: int,
    reps: int,
    seed: int,
    target,
    grid_names: tuple[str, ...] = ("x",),
    n_jobs: int = 1,
) -> EstimatorReport:
    """Replicate simulate-then-estimate ``reps`` times and summarise per grid point.

    ``estimator(sample, grid)`` returns one value per grid point (use
    :func:`pointwise` to wrap a per-point function).  ``target`` holds the
    oracle values.  Replication ``r`` draws from the ``r``-th child of
    ``SeedSequence(seed)``, so results do not depend on ``n_jobs``.
    """
    if reps < 2:
        raise ConfigurationError("need at least two replications")
    grid = np.asarray(grid, dtype=float)
    points = list(grid)
    children = np.random.SeedSequence(seed).spawn(reps)
    if n_jobs == 1:
        results = [_one_rep(truth, design, estimator, points, n, c) for c in children]
    else:
        from joblib import Parallel, delayed

        results = Parallel(n_jobs=n_jobs)(
            delayed(_one_rep)(truth, design, estimator, points, n, c) for c in children
        )
    est = np.vstack([r[0] for r in results])
    rate = float(np.mean([r[1] for r in results]))
    return EstimatorReport(grid, tuple(grid_names), np.asarray(target, float), est, n, reps, seed, rate)


# -- preset models -------------------------------------------------------------


def _logistic(z):
    return special.expit(z)


def preset(name: str) -> DesignTruth:
    """Named models used by the acceptance suite and the ``simulate``/``validate`` commands."""
    m_lin = lambda x: 1.0 + 2.0 * np.asarray(x)  # noqa: E731
    eps = stats.norm(0.0, 0.5)
    unit = stats.uniform(0.0, 1.0)
    if name == "plain":
        return DesignTruth(unit, p=lambda x: _logistic(2.0 * np.asarray(x) - 1.0))
    if name == "case_control":
        return DesignTruth(unit, p=lambda x: _logistic(2.0 * np.asarray(x) - 1.0), lambda0=0.9, lambda1=0.3)
    if name == "x_truncated":
        return DesignTruth(
            unit, p=lambda x: _logistic(2.0 * np.asarray(x) - 1.0), trunc_interval=(0.2, 0.8)
        )
    if name == "left_truncated":
        return DesignTruth(unit, m=m_lin, eps=eps, t_dist=stats.norm(-1.0, 1.0))
    if name == "left_truncated_uniform_t":
        return DesignTruth(unit, m=m_lin, eps=eps, t_dist=stats.uniform(-1.0, 1.0))
    if name == "ltrc":
        return DesignTruth(unit, m=m_lin, eps=eps, t_dist=stats.norm(-1.0, 1.0), c_dist=stats.uniform(1.0, 5.0))
    if name == "right_truncated":
        return DesignTruth(unit, m=m_lin, eps=eps, c_dist=stats.norm(3.0, 1.0))
    if name == "double_truncated":
        return DesignTruth(
            unit, m=m_lin, eps=eps, t_dist=stats.uniform(-2.0, 1.0), c_dist=stats.uniform(3.0, 1.0)
        )
    if name == "current_status":
        return DesignTruth(
            stats.uniform(-1.0, 2.0), m=lambda x: np.asarray(x, dtype=float), eps=stats.norm(0.0, 1.0),
            c_dist=stats.uniform(-3.0, 6.0),
        )
    raise ConfigurationError(f"unknown preset {name!r}")


PRESETS = (
    "plain",
    "case_control",
    "x_truncated",
    "left_truncated",
    "left_truncated_uniform_t",
    "ltrc",
    "right_truncated",
    "double_truncated",
    "current_status",
)
