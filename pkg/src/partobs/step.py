"""Right-continuous step distributions and the generic product-limit engine.

Every product-limit estimator in the package reduces to one computation:
at each distinct event value ``v`` take the event mass ``d(v)`` and the
weighted risk set ``D(v) = sum_j w_j 1{lower_j <= v <= upper_j}``, then
multiply the factors ``1 - d(v) / D(v)``.  Forward products (over
``v <= y``) give a survival function; reverse products (over ``v > y``)
give the distribution function of a right-truncated variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .kernels import check_in_window

# total mass below 1 - DEFECT_TOL counts as defective
DEFECT_TOL = 1e-10


class Quantile(NamedTuple):
    value: float
    boundary: bool


@dataclass(frozen=True)
class StepDistribution:
    """Nondecreasing right-continuous step function on ``[0, 1]``.

    ``cdf_values[k]`` is the value on ``[locations[k], locations[k+1])``;
    the function is 0 left of ``locations[0]``.  A total below one means
    the tail mass beyond the last jump is not identified (a defective
    distribution); it is never renormalised away.  ``notes`` carries
    per-estimate bookkeeping (skipped records, clipping counts, ...).
    """

    locations: np.ndarray
    cdf_values: np.ndarray
    notes: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=float)
        val = np.asarray(self.cdf_values, dtype=float)
        if loc.shape != val.shape or loc.ndim != 1:
            raise ValueError("locations and cdf_values must be 1-d arrays of equal length")
        if loc.size > 1 and np.any(np.diff(loc) <= 0):
            raise ValueError("locations must be strictly increasing")
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "cdf_values", val)

    @classmethod
    def from_survival(cls, locations, survival, notes=None) -> "StepDistribution":
        return cls(np.asarray(locations, float), 1.0 - np.asarray(survival, float), notes or {})

    @classmethod
    def empty(cls) -> "StepDistribution":
        return cls(np.empty(0), np.empty(0))

    def __len__(self) -> int:
        return self.locations.size

    @property
    def masses(self) -> np.ndarray:
        return np.diff(self.cdf_values, prepend=0.0)

    @property
    def total(self) -> float:
        return float(self.cdf_values[-1]) if self.cdf_values.size else 0.0

    @property
    def defect(self) -> float:
        return 1.0 - self.total

    @property
    def is_defective(self) -> bool:
        return self.defect > DEFECT_TOL

    def cdf(self, y):
        idx = np.searchsorted(self.locations, y, side="right") - 1
        out = np.where(idx >= 0, self.cdf_values[np.clip(idx, 0, None)] if len(self) else 0.0, 0.0)
        return float(out) if np.ndim(out) == 0 else out

    def cdf_left(self, y):
        """Left limit ``F(y-)``."""
        idx = np.searchsorted(self.locations, y, side="left") - 1
        out = np.where(idx >= 0, self.cdf_values[np.clip(idx, 0, None)] if len(self) else 0.0, 0.0)
        return float(out) if np.ndim(out) == 0 else out

    def survival(self, y):
        return 1.0 - self.cdf(y)

    def survival_left(self, y):
        return 1.0 - self.cdf_left(y)

    def mean(self) -> float:
        """Jump sum ``sum_k location_k * mass_k`` (no renormalisation of defects)."""
        m = self.masses
        pos = m > 0
        return float(np.sum(self.locations[pos] * m[pos]))

    def quantile(self, u: float) -> Quantile:
        """Generalised inverse ``inf{y : F(y) >= u}``.

        When ``u`` exceeds the total mass the last jump location is returned
        with ``boundary=True``.
        """
        if not len(self):
            raise ValueError("quantile of an empty step distribution")
        k = int(np.searchsorted(self.cdf_values, u, side="left"))
        if k >= len(self):
            return Quantile(float(self.locations[-1]), True)
        return Quantile(float(self.locations[k]), False)

    def shift(self, c: float) -> "StepDistribution":
        return StepDistribution(self.locations + c, self.cdf_values.copy(), dict(self.notes))


def risk_set_mass(values, lower, upper, weights) -> np.ndarray:
    """``D(v) = sum_j w_j 1{lower_j <= v <= upper_j}`` for every ``v`` in ``values``."""
    lower = np.asarray(lower, float)
    upper = np.asarray(upper, float)
    weights = np.asarray(weights, float)
    lo_order = np.argsort(lower, kind="stable")
    up_order = np.argsort(upper, kind="stable")
    cum_lo = np.concatenate([[0.0], np.cumsum(weights[lo_order])])
    cum_up = np.concatenate([[0.0], np.cumsum(weights[up_order])])
    entered = cum_lo[np.searchsorted(lower[lo_order], values, side="right")]
    left = cum_up[np.searchsorted(upper[up_order], values, side="left")]
    return entered - left


def product_limit(
    event_values,
    event_weights,
    lower,
    upper,
    risk_weights,
    reverse: bool = False,
) -> StepDistribution:
    """Weighted product-limit estimator with the ``0/0 = 0`` convention.

    Parameters
    ----------
    event_values, event_weights : array_like
        Observed event locations and their (kernel) weights.  Events with
        zero weight are dropped; tied values are processed jointly with a
        shared risk set.
    lower, upper, risk_weights : array_like
        Record ``j`` is at risk at ``v`` when ``lower_j <= v <= upper_j``.
    reverse : bool
        If False return ``1 - prod_{v <= y} (1 - d/D)`` (forward, survival
        type).  If True return ``prod_{v > y} (1 - d/D)`` directly as a
        distribution function (right truncation).
    """
    ev = np.asarray(event_values, float)
    ew = np.asarray(event_weights, float) * np.ones_like(ev)
    keep = ew > 0
    ev, ew = ev[keep], ew[keep]
    if ev.size == 0:
        return StepDistribution.empty()
    locs, inverse = np.unique(ev, return_inverse=True)
    d = np.bincount(inverse, weights=ew, minlength=locs.size)
    D = risk_set_mass(locs, lower, upper, np.asarray(risk_weights, float) * np.ones(np.shape(lower)))
    ratio = np.zeros_like(d)
    pos = D > 0
    ratio[pos] = np.minimum(d[pos] / D[pos], 1.0)
    # D is a difference of cumulative sums; snap a risk set made only of the events themselves
    ratio[pos & np.isclose(D, d, rtol=1e-12, atol=0.0)] = 1.0
    factors = 1.0 - ratio
    if not reverse:
        return StepDistribution.from_survival(locs, np.cumprod(factors))
    # F(v_k) = prod_{l > k} factors_l
    tail = np.cumprod(factors[::-1])[::-1]
    cdf = np.append(tail[1:], 1.0)
    return StepDistribution(locs, cdf)


class ConditionalCdfEstimate:
    """Map ``x -> StepDistribution`` in ``y``, restricted to an evaluation window.

    ``slicer`` computes the slice at a given ``x``; slices are cached.
    """

    def __init__(self, slicer: Callable[[float], StepDistribution], window: tuple[float, float]):
        self._slicer = slicer
        self.window = (float(window[0]), float(window[1]))
        self._cache: dict[float, StepDistribution] = {}

    def slice(self, x: float) -> StepDistribution:
        x = float(x)
        check_in_window(x, self.window)
        if x not in self._cache:
            self._cache[x] = self._slicer(x)
        return self._cache[x]

    def evaluate(self, y, x: float):
        return self.slice(x).cdf(y)

    def default_grid(self, size: int = 101) -> np.ndarray:
        return np.linspace(self.window[0], self.window[1], size)
