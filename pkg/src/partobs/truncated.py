"""Regression under left truncation of the response.

Model ``Y = m(X) + eps`` with ``Y`` observed only when ``T <= Y`` for an
independent truncation variable ``T``.  The conditional distribution of
``Y`` given ``X = x`` is recovered by a kernel-weighted product-limit
estimator built from the ratio of the sub-distribution ``A`` to the
risk function ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DataError, DegenerateInputError, NotEstimableError
from .kernels import Kernel, evaluation_window, local_weights
from .step import ConditionalCdfEstimate, StepDistribution, product_limit


@dataclass(frozen=True)
class LeftTruncatedSample:
    """Columns ``(x, t, y)`` observed conditionally on ``t <= y``."""

    x: np.ndarray
    t: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        cols = [np.asarray(c, dtype=float) for c in (self.x, self.t, self.y)]
        if len({c.shape for c in cols}) != 1 or cols[0].ndim != 1:
            raise DataError("x, t and y must be 1-d columns of equal length")
        x, t, y = cols
        bad = np.flatnonzero(~(t <= y))
        if bad.size:
            raise DataError(f"{bad.size} records violate t <= y (first at index {bad[0]})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return self.x.size

    def shifted(self, c: float) -> "LeftTruncatedSample":
        return LeftTruncatedSample(self.x, self.t + c, self.y + c)


def _weights(sample, kernel, h, x, window_check):
    w = local_weights(kernel, h, x, sample.x, window_check)
    if np.sum(w) <= 0:
        raise NotEstimableError(f"no kernel mass at x={x:g}")
    return w


def estimate_A(sample: LeftTruncatedSample, kernel: Kernel, h, y, x: float, window_check: bool = True):
    """Kernel estimate of ``A(y; x) = P(Y <= y | X = x, T <= Y)``."""
    w = _weights(sample, kernel, h, x, window_check)
    yy = np.atleast_1d(np.asarray(y, dtype=float))
    num = np.array([np.sum(w * ((sample.t <= sample.y) & (sample.y <= v))) for v in yy])
    out = num / np.sum(w * (sample.t <= sample.y))
    return float(out[0]) if np.ndim(y) == 0 else out


def estimate_B(sample: LeftTruncatedSample, kernel: Kernel, h, y, x: float, window_check: bool = True):
    """Kernel estimate of ``B(y; x) = P(T <= y <= Y | X = x, T <= Y)``."""
    w = _weights(sample, kernel, h, x, window_check)
    yy = np.atleast_1d(np.asarray(y, dtype=float))
    num = np.array([np.sum(w * ((sample.t <= v) & (v <= sample.y))) for v in yy])
    out = num / np.sum(w * (sample.t <= sample.y))
    return float(out[0]) if np.ndim(y) == 0 else out


def conditional_cdf(
    sample: LeftTruncatedSample, kernel: Kernel, h, x: float, window_check: bool = True
) -> StepDistribution:
    """Product-limit estimate of ``F_{Y|X}(.; x)``.

    ``F(y; x) = 1 - prod_{Y_i <= y} (1 - K_h(x - X_i) / sum_j K_h(x - X_j) 1{T_j <= Y_i <= Y_j})``
    with ``0/0 = 0``.  Jumps sit at the observed ``Y_i`` carrying positive
    kernel weight; tied values share one factor.
    """
    w = _weights(sample, kernel, h, x, window_check)
    return product_limit(sample.y, w, sample.t, sample.y, w)


def conditional_cdf_estimate(sample: LeftTruncatedSample, kernel: Kernel, h) -> ConditionalCdfEstimate:
    window = evaluation_window(sample.x, h)
    return ConditionalCdfEstimate(lambda x: conditional_cdf(sample, kernel, h, x), window)


def regression_mean(sample: LeftTruncatedSample, kernel: Kernel, h, x: float, window_check: bool = True) -> float:
    """``m_hat(x) = sum_i Y_i * jump of F_hat(.; x) at Y_i``."""
    return conditional_cdf(sample, kernel, h, x, window_check).mean()


def marginal_survival_Y(sample: LeftTruncatedSample) -> StepDistribution:
    """Lynden-Bell product-limit estimate of the law of ``Y`` (use ``.survival``)."""
    if len(sample) == 0:
        raise DegenerateInputError("no records")
    ones = np.ones(len(sample))
    return product_limit(sample.y, ones, sample.t, sample.y, ones)


def truncation_cdf_T(sample: LeftTruncatedSample) -> StepDistribution:
    """Product-limit estimate of ``F_T`` (``T`` is right-truncated by ``Y``).

    Right-continuous version ``F(t) = prod_{T_i > t} (1 - d/D)`` with risk
    sets ``{j : T_j <= T_i <= Y_j}``.
    """
    if len(sample) == 0:
        raise DegenerateInputError("no records")
    ones = np.ones(len(sample))
    return product_limit(sample.t, ones, sample.t, sample.y, ones, reverse=True)


def residual_cdf(
    sample: LeftTruncatedSample,
    kernel: Kernel,
    h,
    m_hat: Callable[[float], float] | None = None,
    window_check: bool = True,
) -> StepDistribution:
    """Estimate of ``F_eps`` averaging ``F_hat(s + m_hat(X_i); X_i)`` over records.

    Records whose covariate lies outside the evaluation window are skipped;
    their count is stored in ``notes["skipped"]``.  ``m_hat`` defaults to
    :func:`regression_mean` with the same kernel and bandwidth.
    """
    if window_check:
        window = evaluation_window(sample.x, h)
        usable = np.flatnonzero((sample.x >= window[0]) & (sample.x <= window[1]))
    else:
        usable = np.arange(len(sample))
    if usable.size == 0:
        raise DegenerateInputError("no record lies inside the evaluation window")
    locs, masses = [], []
    cache: dict[float, StepDistribution] = {}
    for i in usable:
        xi = float(sample.x[i])
        if xi not in cache:
            cache[xi] = conditional_cdf(sample, kernel, h, xi, window_check=False)
        sl = cache[xi]
        centre = sl.mean() if m_hat is None else float(m_hat(xi))
        locs.append(sl.locations - centre)
        masses.append(sl.masses)
    locs_all = np.concatenate(locs)
    mass_all = np.concatenate(masses) / usable.size
    grid, inverse = np.unique(locs_all, return_inverse=True)
    cdf = np.cumsum(np.bincount(inverse, weights=mass_all, minlength=grid.size))
    return StepDistribution(grid, np.minimum(cdf, 1.0), {"skipped": int(len(sample) - usable.size)})


def mean_Y(sample: LeftTruncatedSample) -> float:
    """Mean of ``Y`` from the product-limit jumps ``S(Y_i-) / D(Y_i)``."""
    return marginal_survival_Y(sample).mean()


def mean_T(sample: LeftTruncatedSample) -> float:
    """Mean of ``T`` from the product-limit jumps ``F(T_i) / D(T_i)``."""
    return truncation_cdf_T(sample).mean()
