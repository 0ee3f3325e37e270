"""Product-limit estimators for three further observation schemes.

* LTRC: ``Y`` left-truncated by ``T`` and right-censored by ``C``; we see
  ``(X, T, Z = min(Y, C), delta = 1{Y <= C})`` when ``T <= Z``.
* Right truncation: ``(X, Y, C)`` seen only when ``Y <= C``.
* Double truncation: ``(X, T, Y, C)`` seen only when ``T <= Y <= C``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, DegenerateInputError, NotEstimableError
from .kernels import Kernel, evaluation_window, local_weights
from .step import ConditionalCdfEstimate, StepDistribution, product_limit


def _columns(obj, names):
    cols = [np.asarray(getattr(obj, n), dtype=float) for n in names]
    if len({c.shape for c in cols}) != 1 or cols[0].ndim != 1:
        raise DataError(f"columns {', '.join(names)} must be 1-d and of equal length")
    for n, c in zip(names, cols):
        object.__setattr__(obj, n, c)
    return cols


def _reject(mask, condition):
    bad = np.flatnonzero(~mask)
    if bad.size:
        raise DataError(f"{bad.size} records violate {condition} (first at index {bad[0]})")


@dataclass(frozen=True)
class LtrcSample:
    """Left-truncated, right-censored records ``(x, t, z, delta)`` with ``t <= z``."""

    x: np.ndarray
    t: np.ndarray
    z: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        x, t, z, d = _columns(self, ("x", "t", "z", "delta"))
        if not np.all((d == 0) | (d == 1)):
            raise DataError("delta must be binary")
        _reject(t <= z, "t <= z")

    def __len__(self):
        return self.x.size


@dataclass(frozen=True)
class RightTruncatedSample:
    """Right-truncated records ``(x, y, c)`` with ``y <= c``."""

    x: np.ndarray
    y: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        x, y, c = _columns(self, ("x", "y", "c"))
        _reject(y <= c, "y <= c")

    def __len__(self):
        return self.x.size


@dataclass(frozen=True)
class DoublyTruncatedSample:
    """Doubly truncated records ``(x, t, y, c)`` with ``t <= y <= c``."""

    x: np.ndarray
    t: np.ndarray
    y: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        x, t, y, c = _columns(self, ("x", "t", "y", "c"))
        _reject((t <= y) & (y <= c), "t <= y <= c")

    def __len__(self):
        return self.x.size


def _weights(sample, kernel, h, x, window_check):
    w = local_weights(kernel, h, x, sample.x, window_check)
    if np.sum(w) <= 0:
        raise NotEstimableError(f"no kernel mass at x={x:g}")
    return w


def _nonempty(sample):
    if len(sample) == 0:
        raise DegenerateInputError("no records")


def _event_mean(dist: StepDistribution, x) -> float:
    if not len(dist):
        raise NotEstimableError(f"no uncensored event carries kernel weight at x={x:g}")
    return dist.mean()


# -- left truncation + right censoring ---------------------------------------


def ltrc_conditional_survival(
    sample: LtrcSample, kernel: Kernel, h, x: float, window_check: bool = True
) -> StepDistribution:
    """Kernel product-limit estimate of ``F_{Y|X}(.; x)`` under LTRC.

    Events are uncensored ``Z_i`` and the risk set at ``v`` is
    ``{j : T_j <= v <= Z_j}``; censorings tied with an event stay at
    risk.  Read the survival function with ``.survival``.  When the last
    record is censored the result is defective (``.defect > 0``).
    """
    w = _weights(sample, kernel, h, x, window_check)
    return product_limit(sample.z, w * sample.delta, sample.t, sample.z, w)


def ltrc_regression_mean(sample: LtrcSample, kernel: Kernel, h, x: float, window_check: bool = True) -> float:
    return _event_mean(ltrc_conditional_survival(sample, kernel, h, x, window_check), x)


def ltrc_marginal_survival(sample: LtrcSample) -> StepDistribution:
    """Kernel-free LTRC product-limit estimate; Kaplan-Meier when nothing is truncated."""
    _nonempty(sample)
    ones = np.ones(len(sample))
    return product_limit(sample.z, sample.delta, sample.t, sample.z, ones)


def ltrc_estimate(sample: LtrcSample, kernel: Kernel, h) -> ConditionalCdfEstimate:
    return ConditionalCdfEstimate(
        lambda x: ltrc_conditional_survival(sample, kernel, h, x), evaluation_window(sample.x, h)
    )


# -- right truncation ----------------------------------------------------------


def rt_conditional_cdf(
    sample: RightTruncatedSample, kernel: Kernel, h, x: float, window_check: bool = True
) -> StepDistribution:
    """Reverse-time product-limit estimate of ``F_{Y|X}(.; x)`` under right truncation.

    ``F(y; x) = prod_{Y_i > y} (1 - K_h(x - X_i) / sum_j K_h(x - X_j) 1{Y_j <= Y_i <= C_j})``.
    """
    w = _weights(sample, kernel, h, x, window_check)
    return product_limit(sample.y, w, sample.y, sample.c, w, reverse=True)


def rt_censoring_survival(sample: RightTruncatedSample) -> StepDistribution:
    """Product-limit estimate of ``F_C``; ``C`` is left-truncated by ``Y``.

    Risk set at ``C_i`` is ``{j : Y_j <= C_i <= C_j}``.
    """
    _nonempty(sample)
    ones = np.ones(len(sample))
    return product_limit(sample.c, ones, sample.y, sample.c, ones)


def rt_regression_mean(sample: RightTruncatedSample, kernel: Kernel, h, x: float, window_check: bool = True) -> float:
    return _event_mean(rt_conditional_cdf(sample, kernel, h, x, window_check), x)


def rt_estimate(sample: RightTruncatedSample, kernel: Kernel, h) -> ConditionalCdfEstimate:
    return ConditionalCdfEstimate(
        lambda x: rt_conditional_cdf(sample, kernel, h, x), evaluation_window(sample.x, h)
    )


# -- double truncation ---------------------------------------------------------


def dt_censoring_survival(sample: DoublyTruncatedSample) -> StepDistribution:
    """Product-limit estimate of ``F_C`` with risk sets ``{j : Y_j <= C_i <= C_j}``."""
    _nonempty(sample)
    ones = np.ones(len(sample))
    return product_limit(sample.c, ones, sample.y, sample.c, ones)


def dt_truncation_cdf(sample: DoublyTruncatedSample) -> StepDistribution:
    """Product-limit estimate of ``F_T``: ``prod_{T_i > t} (1 - 1 / #{j : T_j <= T_i <= Y_j})``."""
    _nonempty(sample)
    ones = np.ones(len(sample))
    return product_limit(sample.t, ones, sample.t, sample.y, ones, reverse=True)


def dt_truncation_cdf_as_printed(sample: DoublyTruncatedSample, t) -> np.ndarray:
    """Literal reading ``prod_i (1 - 1{T_i <= Y_i <= C_i <= t} / #{j : T_j <= T_i <= Y_j <= C_j})``.

    Kept for comparison only: the numerator indexes ``C`` where ``T`` is
    expected, so this is nonincreasing in ``t`` and does not estimate
    ``F_T``.  Use :func:`dt_truncation_cdf`.
    """
    _nonempty(sample)
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    D = np.array(
        [np.sum((sample.t <= ti) & (ti <= sample.y) & (sample.y <= sample.c)) for ti in sample.t],
        dtype=float,
    )
    out = np.empty(tt.size)
    for k, v in enumerate(tt):
        num = (sample.t <= sample.y) & (sample.y <= sample.c) & (sample.c <= v)
        out[k] = np.prod(1.0 - np.where(D > 0, num / np.where(D > 0, D, 1.0), 0.0))
    return out


def dt_H(sample: DoublyTruncatedSample, kernel: Kernel, h, x: float, window_check: bool = True) -> StepDistribution:
    """Kernel product-limit estimate whose survival is the normalised ``H(.; x)``.

    Risk sets ``{j : T_j <= Y_i <= Y_j <= C_j}``; the survival function
    estimates ``int_y^inf Fbar_C dF(.; x) / int Fbar_C dF(.; x)``.
    """
    w = _weights(sample, kernel, h, x, window_check)
    return product_limit(sample.y, w, sample.t, sample.y, w)


def dt_conditional_cdf(
    sample: DoublyTruncatedSample,
    kernel: Kernel,
    h,
    x: float,
    fc: StepDistribution | None = None,
    normalize: bool = True,
    window_check: bool = True,
) -> StepDistribution:
    """Estimate ``F_{Y|X}(y; x) = sum_{Y_i <= y} dG(Y_i; x) / Fbar_C(Y_i)``.

    ``G = 1 - H_hat`` comes from :func:`dt_H` and ``fc`` defaults to
    :func:`dt_censoring_survival`.  Events where the censoring survival
    vanishes are excluded (``notes["excluded"]``).  With ``normalize``
    the weighted sum is divided by its total, which removes the factor
    ``int Fbar_C dF`` lost in the product-limit step; otherwise the raw
    sum is clipped to ``[0, 1]`` and the number of clipped jump points is
    reported in ``notes["clipped"]``.
    """
    if fc is None:
        fc = dt_censoring_survival(sample)
    g = dt_H(sample, kernel, h, x, window_check)
    surv_c = fc.survival(g.locations)
    ok = surv_c > 0
    contrib = np.where(ok, g.masses / np.where(ok, surv_c, 1.0), 0.0)
    raw = np.cumsum(contrib)
    total = float(raw[-1]) if raw.size else 0.0
    notes = {"excluded": int(np.sum(~ok & (g.masses > 0))), "normalizer": total, "clipped": 0}
    if normalize:
        if total <= 0:
            raise NotEstimableError(f"no identifiable event mass at x={x:g}")
        cdf = np.minimum(raw / total, 1.0)
    else:
        notes["clipped"] = int(np.sum(raw > 1.0))
        cdf = np.clip(raw, 0.0, 1.0)
    return StepDistribution(g.locations, cdf, notes)


def dt_regression_mean(sample: DoublyTruncatedSample, kernel: Kernel, h, x: float, **kw) -> float:
    return _event_mean(dt_conditional_cdf(sample, kernel, h, x, **kw), x)


def dt_estimate(sample: DoublyTruncatedSample, kernel: Kernel, h, normalize: bool = True) -> ConditionalCdfEstimate:
    fc = dt_censoring_survival(sample)
    return ConditionalCdfEstimate(
        lambda x: dt_conditional_cdf(sample, kernel, h, x, fc=fc, normalize=normalize),
        evaluation_window(sample.x, h),
    )
