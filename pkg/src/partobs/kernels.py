"""Kernels, bandwidths and evaluation windows shared by every smoother.

All kernels are symmetric densities on the real line.  The second moment
``kappa1 = int u^2 K(u) du`` and roughness ``kappa2 = int K(u)^2 du`` enter
the first-order bias and variance of the kernel estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import ConfigurationError, DegenerateInputError

KernelKind = Literal["epanechnikov", "triangular", "gaussian", "uniform"]

# closed-form (kappa1, kappa2) per kind
_MOMENTS: dict[str, tuple[float, float]] = {
    "epanechnikov": (0.2, 0.6),
    "triangular": (1.0 / 6.0, 2.0 / 3.0),
    "gaussian": (1.0, 1.0 / (2.0 * math.sqrt(math.pi))),
    "uniform": (1.0 / 3.0, 0.5),
}

_SQRT_2PI = math.sqrt(2.0 * math.pi)

DEFAULT_EXPONENT = 0.25
RATE_WINDOW = (0.2, 1.0 / 3.0)


@dataclass(frozen=True)
class Kernel:
    """A symmetric probability density used as smoothing kernel.

    Parameters
    ----------
    kind : {"epanechnikov", "triangular", "gaussian", "uniform"}
        Kernel family.  Compact kernels are supported on ``[-1, 1]``.
    """

    kind: KernelKind = "epanechnikov"

    def __post_init__(self):
        if self.kind not in _MOMENTS:
            raise ConfigurationError(
                f"unknown kernel kind {self.kind!r}; expected one of {sorted(_MOMENTS)}"
            )

    @property
    def kappa1(self) -> float:
        return _MOMENTS[self.kind][0]

    @property
    def kappa2(self) -> float:
        return _MOMENTS[self.kind][1]

    @property
    def compact(self) -> bool:
        return self.kind != "gaussian"

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if self.kind == "gaussian":
            return np.exp(-0.5 * u * u) / _SQRT_2PI
        a = np.abs(u)
        inside = a <= 1.0
        if self.kind == "epanechnikov":
            val = 0.75 * (1.0 - u * u)
        elif self.kind == "triangular":
            val = 1.0 - a
        else:
            val = np.full_like(u, 0.5)
        return np.where(inside, val, 0.0)


@dataclass(frozen=True)
class Bandwidth:
    """Smoothing bandwidth ``h`` with the rule that produced it."""

    h: float
    rule: Literal["fixed", "scaled_power"] = "fixed"

    def __post_init__(self):
        if not (np.isfinite(self.h) and self.h > 0):
            raise ConfigurationError(f"bandwidth must be positive and finite, got {self.h}")

    def __float__(self) -> float:
        return float(self.h)


def as_bandwidth(h) -> float:
    """Return the numeric bandwidth from a ``Bandwidth`` or a number, validating it."""
    if isinstance(h, Bandwidth):
        return h.h
    h = float(h)
    if not (np.isfinite(h) and h > 0):
        raise ConfigurationError(f"bandwidth must be positive and finite, got {h}")
    return h


def kernel_weight(kernel: Kernel, h, x, xi):
    """Scaled kernel weight ``K_h(x - xi) = K((x - xi) / h) / h``.

    Broadcasts over ``x`` and ``xi``; returns a float for scalar inputs.
    """
    hv = as_bandwidth(h)
    w = kernel((np.asarray(x, dtype=float) - np.asarray(xi, dtype=float)) / hv) / hv
    return float(w) if np.ndim(w) == 0 else w


def default_bandwidth(
    xs: Sequence[float],
    a: float = DEFAULT_EXPONENT,
    c: float = 1.06,
    check_rate: bool = True,
) -> Bandwidth:
    """Scaled power rule ``h = c * sd(xs) * n**(-a)``.

    The exponent must lie in the open interval (1/5, 1/3) so that
    ``n h^3 -> inf`` and ``n h^5 -> 0`` hold together; pass
    ``check_rate=False`` to bypass the check.
    """
    xs = np.asarray(xs, dtype=float)
    n = xs.size
    if n < 2:
        raise DegenerateInputError("need at least two covariate values to scale a bandwidth")
    if check_rate and not (RATE_WINDOW[0] < a < RATE_WINDOW[1]):
        raise ConfigurationError(f"bandwidth exponent a={a} outside the open interval (1/5, 1/3)")
    sd = float(np.std(xs, ddof=1))
    if sd == 0.0:
        raise DegenerateInputError("covariate values are constant; cannot scale a bandwidth")
    return Bandwidth(c * sd * n ** (-a), "scaled_power")


def evaluation_window(xs: Sequence[float], h) -> tuple[float, float]:
    """Interval ``[min(xs) + h, max(xs) - h]`` on which conditional estimators are defined."""
    hv = as_bandwidth(h)
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise DegenerateInputError("no covariate values")
    lo, hi = float(xs.min()), float(xs.max())
    if not hi - lo > 2.0 * hv:
        raise ConfigurationError(
            f"empty evaluation window: need max(x) - min(x) > 2h, got {hi - lo:g} <= {2 * hv:g}"
        )
    return lo + hv, hi - hv


def check_in_window(x: float, window: tuple[float, float]) -> None:
    if not window[0] <= x <= window[1]:
        raise ConfigurationError(
            f"x={x:g} outside the evaluation window [{window[0]:g}, {window[1]:g}]"
        )


def local_weights(kernel: Kernel, h, x0: float, xs, window_check: bool = True) -> np.ndarray:
    """Kernel weights of all records at ``x0``, enforcing the evaluation window.

    Raises ``ConfigurationError`` when ``x0`` falls outside the window; set
    ``window_check=False`` for degenerate wide-kernel evaluations.
    """
    xs = np.asarray(xs, dtype=float)
    if window_check:
        check_in_window(x0, evaluation_window(xs, h))
    return kernel_weight(kernel, h, x0, xs) * np.ones_like(xs)
