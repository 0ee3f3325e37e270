"""Estimation of ``p(x) = P(Y = 1 | X = x)`` for a binary response.

Covers plain sampling, case-control (response-dependent) sampling and
sampling restricted to a fixed covariate interval.  Under case-control
sampling only the odds-type function ``alpha(x) = theta (1 - p) / p`` is
identified from the sample, so every route to ``p`` takes the sampling
ratio ``theta = lambda0 / lambda1`` as an explicit argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConfigurationError, DataError, DegenerateInputError, NotEstimableError
from .isotonic import pava
from .kernels import Kernel, check_in_window, evaluation_window, kernel_weight
from .step import Quantile

Direction = Literal["increasing", "decreasing"]


@dataclass(frozen=True)
class BinarySample:
    """Columns of binary records ``(x, y, s)``; ``s`` defaults to all ones."""

    x: np.ndarray
    y: np.ndarray
    s: np.ndarray | None = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        s = np.ones_like(x) if self.s is None else np.asarray(self.s, dtype=float)
        if not (x.shape == y.shape == s.shape) or x.ndim != 1:
            raise DataError("x, y and s must be 1-d columns of equal length")
        for name, col in (("y", y), ("s", s)):
            if not np.all((col == 0) | (col == 1)):
                raise DataError(f"column {name} must be binary")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "s", s)

    def __len__(self):
        return self.x.size

    def sampled(self) -> "BinarySample":
        keep = self.s == 1
        return BinarySample(self.x[keep], self.y[keep])


@dataclass(frozen=True)
class BernoulliFit:
    """Probability estimates on an ordered grid.

    ``weights`` are the cell counts (discrete fits) or kernel masses
    (kernel fits) used as least-squares weights when monotonising.
    """

    kind: Literal["discrete_grid", "kernel"]
    grid: np.ndarray
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any((v < 0) | (v > 1)):
            raise ValueError("fitted probabilities must lie in [0, 1]")

    def as_dict(self) -> dict[float, float]:
        return dict(zip(self.grid.tolist(), self.values.tolist()))

    def __call__(self, x):
        idx = np.searchsorted(self.grid, x)
        if np.any(idx >= self.grid.size) or np.any(self.grid[np.minimum(idx, self.grid.size - 1)] != x):
            raise KeyError(f"{x} is not a grid point of this fit")
        return self.values[idx]


def fit_discrete_mle(sample: BinarySample) -> BernoulliFit:
    """Cell proportions of ``y = 1`` at each distinct covariate level (sampled rows only)."""
    sample = sample.sampled()
    if len(sample) == 0:
        raise DegenerateInputError("no records")
    levels, inverse = np.unique(sample.x, return_inverse=True)
    counts = np.bincount(inverse).astype(float)
    ones = np.bincount(inverse, weights=sample.y)
    return BernoulliFit("discrete_grid", levels, ones / counts, counts)


def _kernel_mass(sample: BinarySample, kernel, h, x, window_check):
    if window_check:
        check_in_window(x, evaluation_window(sample.x, h))
    return kernel_weight(kernel, h, x, sample.x) * np.ones_like(sample.x)


def fit_kernel(sample: BinarySample, kernel: Kernel, h, x: float, window_check: bool = True) -> float:
    """Nadaraya-Watson estimate ``sum y_i K_h(x - x_i) / sum K_h(x - x_i)``."""
    sample = sample.sampled()
    w = _kernel_mass(sample, kernel, h, x, window_check)
    den = np.sum(w)
    if den <= 0:
        raise NotEstimableError(f"no kernel mass at x={x:g}")
    return float(np.sum(sample.y * w) / den)


def fit_kernel_grid(sample: BinarySample, kernel: Kernel, h, grid=None) -> BernoulliFit:
    """Kernel fit on a grid (default: 101 points spanning the evaluation window)."""
    if grid is None:
        lo, hi = evaluation_window(sample.sampled().x, h)
        grid = np.linspace(lo, hi, 101)
    grid = np.asarray(grid, dtype=float)
    vals = np.array([fit_kernel(sample, kernel, h, g) for g in grid])
    mass = np.array([np.sum(_kernel_mass(sample.sampled(), kernel, h, g, False)) for g in grid])
    return BernoulliFit("kernel", grid, vals, mass)


def sampled_control_fraction(sample: BinarySample) -> float:
    """``1 - sum(y s) / sum(s)``: share of controls among sampled rows.

    This estimates ``theta*gamma / (1 + theta*gamma)``.
    """
    n_s = np.sum(sample.s)
    if n_s == 0:
        raise DegenerateInputError("no sampled rows")
    return float(1.0 - np.sum(sample.y * sample.s) / n_s)


def estimate_theta_gamma(sample: BinarySample) -> float:
    """Maximum likelihood estimate of ``theta * gamma``.

    Among sampled rows ``P(Y=0 | S=1) / P(Y=1 | S=1) = theta * gamma``, so
    the estimate is the sampled control-to-case odds.  Returns ``inf``
    when no case was sampled.
    """
    n_s = np.sum(sample.s)
    if n_s == 0:
        raise DegenerateInputError("no sampled rows")
    cases = np.sum(sample.y * sample.s)
    controls = n_s - cases
    if cases == 0:
        return float("inf")
    return float(controls / cases)


def estimate_alpha(
    sample: BinarySample,
    x: float,
    kernel: Kernel | None = None,
    h=None,
    window_check: bool = True,
) -> float:
    """Weighted control mass over weighted case mass among sampled rows at ``x``.

    Without a kernel the weights are the indicators ``1{x_i = x}`` (discrete
    design).  A cell with controls but no cases returns ``inf``: it maps
    to ``p = 0`` under ``debias_probability``.
    """
    sample = sample.sampled()
    if kernel is None:
        w = (sample.x == x).astype(float)
    else:
        w = _kernel_mass(sample, kernel, h, x, window_check)
    cases = np.sum(sample.y * w)
    controls = np.sum((1.0 - sample.y) * w)
    if cases == 0:
        if controls == 0:
            raise NotEstimableError(f"no sampled records carry weight at x={x:g}")
        return float("inf")
    return float(controls / cases)


def _check_theta(theta):
    if theta is None:
        raise ConfigurationError("the sampling ratio theta must be supplied; it is not identifiable")
    theta = np.asarray(theta, dtype=float)
    if np.any(~np.isfinite(theta)) or np.any(theta <= 0):
        raise ConfigurationError("theta must be positive and finite")
    return theta


def debias_probability(pi, theta):
    """Population probability ``p = theta pi / (1 + (theta - 1) pi)`` from the sampled one."""
    theta = _check_theta(theta)
    pi = np.asarray(pi, dtype=float)
    out = theta * pi / (1.0 + (theta - 1.0) * pi)
    return float(out) if out.ndim == 0 else out


def bias_forward(p, theta):
    """Sampled probability ``pi = p / (p + theta (1 - p))``; inverse of ``debias_probability``."""
    theta = _check_theta(theta)
    p = np.asarray(p, dtype=float)
    out = p / (p + theta * (1.0 - p))
    return float(out) if out.ndim == 0 else out


def _debiased_ratio(y, w, theta):
    num = theta * np.sum(y * w)
    den = np.sum((1.0 - y + theta * y) * w)
    if den <= 0:
        raise NotEstimableError("zero weighted mass among sampled rows")
    return float(num / den)


def fit_debiased(
    sample: BinarySample,
    theta: float,
    kernel: Kernel | None = None,
    h=None,
    grid=None,
) -> BernoulliFit:
    """Bias-corrected estimate of ``p`` from case-control data with known ``theta``.

    Discrete design (``kernel=None``): one value per distinct sampled level.
    Continuous design: kernel weights on ``grid`` (default 101 points over
    the evaluation window).  With ``theta = 1`` both reduce exactly to the
    unweighted fits on the sampled rows.
    """
    theta = float(_check_theta(theta))
    sub = sample.sampled()
    if len(sub) == 0:
        raise DegenerateInputError("no sampled rows")
    if kernel is None:
        levels = np.unique(sub.x)
        vals, counts = [], []
        for lv in levels:
            w = (sub.x == lv).astype(float)
            vals.append(_debiased_ratio(sub.y, w, theta))
            counts.append(w.sum())
        return BernoulliFit("discrete_grid", levels, np.array(vals), np.array(counts))
    if h is None:
        raise ConfigurationError("a bandwidth is required with a kernel")
    if grid is None:
        lo, hi = evaluation_window(sub.x, h)
        grid = np.linspace(lo, hi, 101)
    grid = np.asarray(grid, dtype=float)
    vals, mass = [], []
    for g in grid:
        w = _kernel_mass(sub, kernel, h, g, True)
        vals.append(_debiased_ratio(sub.y, w, theta))
        mass.append(w.sum())
    return BernoulliFit("kernel", grid, np.array(vals), np.array(mass))


def fit_debiased_at(
    sample: BinarySample, theta: float, kernel: Kernel, h, x: float, window_check: bool = True
) -> float:
    """Kernel bias-corrected estimate of ``p(x)`` at a single point."""
    theta = float(_check_theta(theta))
    sub = sample.sampled()
    w = _kernel_mass(sub, kernel, h, x, window_check)
    return _debiased_ratio(sub.y, w, theta)


def monotonize(fit: BernoulliFit, direction: Direction = "increasing") -> BernoulliFit:
    """Weighted isotonic projection of a fit (greatest convex minorant of its cumulative sums)."""
    if direction not in ("increasing", "decreasing"):
        raise ConfigurationError(f"unknown direction {direction!r}")
    vals = pava(fit.values, fit.weights, increasing=direction == "increasing")
    return BernoulliFit(fit.kind, fit.grid, np.clip(vals, 0.0, 1.0), fit.weights)


def invert_monotone(fit: BernoulliFit, u: float, direction: Direction = "increasing") -> Quantile:
    """Grid inverse of a monotone fit.

    Increasing fits: ``inf{x : p(x) >= u}``.  Decreasing fits:
    ``sup{x : p(x) >= u}``, the last grid point before the curve drops
    below ``u``.  The result is flagged as ``boundary`` when the level is
    never attained or the answer sits on the grid edge the level set
    extends past.
    """
    grid, vals = fit.grid, fit.values
    if grid.size == 0:
        raise DegenerateInputError("empty grid")
    hit = np.flatnonzero(vals >= u)
    if direction == "increasing":
        if hit.size == 0:
            return Quantile(float(grid[-1]), True)
        k = hit[0]
        return Quantile(float(grid[k]), bool(k == 0))
    if direction == "decreasing":
        if hit.size == 0:
            return Quantile(float(grid[0]), True)
        k = hit[-1]
        return Quantile(float(grid[k]), bool(k == grid.size - 1))
    raise ConfigurationError(f"unknown direction {direction!r}")
