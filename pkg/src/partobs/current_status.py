"""Current-status (interval) observation of a regression response.

Only an inspection value ``C`` and ``delta = 1{Y <= C}`` are seen for each
record.  At a covariate point ``x`` the curve ``t -> F_eps(t - m(x))`` is
estimated by the local nonparametric maximum likelihood estimator, which
is the kernel-weighted isotonic regression of ``delta`` on ``C``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DataError, DegenerateInputError, IdentifiabilityError, NotEstimableError
from .isotonic import pava
from .kernels import Kernel, evaluation_window, local_weights
from .step import ConditionalCdfEstimate, StepDistribution


@dataclass(frozen=True)
class CurrentStatusSample:
    """Records ``(x, c, delta)`` with ``delta = 1{Y <= c}``."""

    x: np.ndarray
    c: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        cols = [np.asarray(v, dtype=float) for v in (self.x, self.c, self.delta)]
        if len({v.shape for v in cols}) != 1 or cols[0].ndim != 1:
            raise DataError("x, c and delta must be 1-d columns of equal length")
        if not np.all((cols[2] == 0) | (cols[2] == 1)):
            raise DataError("delta must be binary")
        for name, v in zip(("x", "c", "delta"), cols):
            object.__setattr__(self, name, v)

    def __len__(self):
        return self.x.size


def estimate_B_interval(sample: CurrentStatusSample, kernel: Kernel, h, t, x: float, window_check: bool = True):
    """``B_hat(t; x) = sum_i K_h(x - X_i) 1{delta_i = 1, C_i <= t} / sum_i K_h(x - X_i)``."""
    w = local_weights(kernel, h, x, sample.x, window_check)
    den = np.sum(w)
    if den <= 0:
        raise NotEstimableError(f"no kernel mass at x={x:g}")
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    wd = w * sample.delta
    out = np.array([np.sum(wd * (sample.c <= v)) for v in tt]) / den
    return float(out[0]) if np.ndim(t) == 0 else out


def _pooled(sample, kernel, h, x, window_check):
    w = local_weights(kernel, h, x, sample.x, window_check)
    keep = w > 0
    if not np.any(keep):
        raise NotEstimableError(f"no kernel mass at x={x:g}")
    c, d, w = sample.c[keep], sample.delta[keep], w[keep]
    locs, inverse = np.unique(c, return_inverse=True)
    if locs.size < 2:
        raise DegenerateInputError("need at least two distinct inspection values with kernel weight")
    wsum = np.bincount(inverse, weights=w)
    freq = np.bincount(inverse, weights=w * d) / wsum
    return locs, freq, wsum


def fit_current_status(
    sample: CurrentStatusSample, kernel: Kernel, h, x: float, window_check: bool = True
) -> StepDistribution:
    """Local NPMLE of ``t -> P(Y <= t | X = x)`` from current-status data.

    Tied inspection values are pooled first; the weights are the kernel
    masses.  The step at the first inspection value carries whatever mass
    lies at or below it.
    """
    locs, freq, wsum = _pooled(sample, kernel, h, x, window_check)
    fitted = np.clip(pava(freq, wsum), 0.0, 1.0)
    return StepDistribution(locs, fitted, {"kernel_mass": float(wsum.sum())})


def current_status_estimate(sample: CurrentStatusSample, kernel: Kernel, h) -> ConditionalCdfEstimate:
    return ConditionalCdfEstimate(
        lambda x: fit_current_status(sample, kernel, h, x), evaluation_window(sample.x, h)
    )


def regression_mean_interval(
    sample: CurrentStatusSample,
    kernel: Kernel,
    h,
    x: float,
    support: tuple[float, float] | None = None,
    tail_tol: float = 0.05,
    window_check: bool = True,
) -> float:
    """Mean of the fitted curve treated as the conditional law of ``Y`` at ``x``.

    ``support`` optionally restricts the inspection values used.  The fit
    must put at most ``tail_tol`` of probability outside the observed
    inspection range (mass at or below the first value plus mass above the
    last); otherwise :class:`IdentifiabilityError` reports that tail mass.
    """
    if support is not None:
        keep = (sample.c >= support[0]) & (sample.c <= support[1])
        sample = CurrentStatusSample(sample.x[keep], sample.c[keep], sample.delta[keep])
    fit = fit_current_status(sample, kernel, h, x, window_check)
    tail = float(fit.cdf_values[0] + (1.0 - fit.cdf_values[-1]))
    if tail > tail_tol:
        raise IdentifiabilityError(
            f"fitted curve leaves {tail:.3f} of its mass outside the inspection range at x={x:g}",
            tail_mass=tail,
        )
    return fit.mean()


def log_likelihood(values, delta, weights=None) -> float:
    """Weighted Bernoulli log-likelihood ``sum w (delta log F + (1 - delta) log(1 - F))`` with ``0 log 0 = 0``."""
    v = np.asarray(values, dtype=float)
    d = np.asarray(delta, dtype=float)
    w = np.ones_like(v) if weights is None else np.asarray(weights, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(d > 0, d * np.log(v), 0.0)
        b = np.where(d < 1, (1.0 - d) * np.log1p(-v), 0.0)
    return float(np.sum(w * (a + b)))


def deconvolution_diagnostic(sample: CurrentStatusSample, kernel: Kernel, h, x: float, t_grid) -> np.ndarray:
    """Cell ratios ``(B_hat(t_k+1) - B_hat(t_k)) / (F_C(t_k+1) - F_C(t_k))``.

    ``B(t; x) = int_{-inf}^t F(s; x) dF_C(s)``, so the ratio approximates
    ``F(.; x)`` inside each cell; ``F_C`` is the empirical law of all
    inspection values.  Cells with no inspection mass give ``nan``.
    """
    t_grid = np.sort(np.asarray(t_grid, dtype=float))
    b = estimate_B_interval(sample, kernel, h, t_grid, x)
    fc = np.searchsorted(np.sort(sample.c), t_grid, side="right") / len(sample)
    db, dfc = np.diff(b), np.diff(fc)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(dfc > 0, db / dfc, np.nan)


def score_m(delta, c, m: float, eps) -> np.ndarray:
    """Derivative of the current-status log-likelihood in ``m(x)``.

    ``eps`` is a frozen scipy distribution for the error law.
    """
    z = np.asarray(c, dtype=float) - m
    d = np.asarray(delta, dtype=float)
    f, F, S = eps.pdf(z), eps.cdf(z), eps.sf(z)
    return -d * f / F + (1.0 - d) * f / S


def score_eps(delta, c, m: float, eps, a) -> np.ndarray:
    """Score in the direction ``a`` of the error law, by adaptive quadrature.

    ``delta * int_{-inf}^{z} a dF / F(z) + (1 - delta) * int_z^inf a dF / Fbar(z)``
    with ``z = c - m``.  The absolute quadrature tolerance is scaled by the
    tail mass in the denominator, so the ratio is accurate even far in the
    tails.
    """
    z = np.atleast_1d(np.asarray(c, dtype=float) - m)
    d = np.broadcast_to(np.asarray(delta, dtype=float), z.shape)
    out = np.empty(z.shape)
    for k, (zk, dk) in enumerate(zip(z, d)):
        lo, hi, mass = (-np.inf, zk, eps.cdf(zk)) if dk else (zk, np.inf, eps.sf(zk))
        val = integrate.quad(lambda s: a(s) * eps.pdf(s), lo, hi, epsabs=1e-13 * mass, epsrel=1e-12, limit=200)[0]
        out[k] = val / mass
    return out
