"""Conditional quantiles by inverting an estimated conditional distribution.

``quantile_in_y`` inverts ``y -> F(y; x)`` at fixed ``x`` (the usual
conditional quantile).  ``quantile_in_x`` inverts ``x -> F(y; x)`` at fixed
``y`` over a covariate grid: for an increasing regression function the
conditional law shifts right with ``x`` so ``F(y; .)`` decreases, and the
threshold ``q1(u; y)`` solves ``F(y; q1) = u``.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

from .errors import ConfigurationError, DegenerateInputError
from .isotonic import pava
from .kernels import check_in_window
from .step import ConditionalCdfEstimate, Quantile


def _check_level(u):
    if not 0.0 < u < 1.0:
        raise ConfigurationError(f"quantile level must lie in (0, 1), got {u}")


def quantile_in_y(cdf: ConditionalCdfEstimate, u: float, x: float) -> Quantile:
    """``inf{y : F_hat(y; x) >= u}`` on the jump points of the slice at ``x``."""
    _check_level(u)
    return cdf.slice(x).quantile(u)


def x_profile(cdf: ConditionalCdfEstimate, y: float, grid) -> np.ndarray:
    """Values ``F_hat(y; x)`` along a covariate grid."""
    return np.array([cdf.evaluate(y, g) for g in grid], dtype=float)


def quantile_in_x(
    cdf: ConditionalCdfEstimate,
    u: float,
    y: float,
    grid=None,
    direction: Literal["decreasing", "increasing"] = "decreasing",
    monotonize: bool = False,
) -> Quantile:
    """Grid inverse of ``x -> F_hat(y; x)`` at level ``u``.

    ``direction`` states how ``F(y; x)`` varies with ``x``:

    * ``"decreasing"`` (increasing regression function):
      ``sup{x : F_hat(y; x) >= u}``, the last grid point before the
      profile drops below ``u``;
    * ``"increasing"``: ``sup{x : F_hat(y; x) <= u}``.

    ``grid`` defaults to 101 equispaced points over the evaluation window.
    With ``monotonize`` the profile is first projected onto monotone
    sequences in the stated direction.  The answer is flagged when the
    defining set is empty or reaches the right end of the grid.
    """
    _check_level(u)
    grid = cdf.default_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DegenerateInputError("empty covariate grid")
    for g in (grid[0], grid[-1]):
        check_in_window(float(g), cdf.window)
    prof = x_profile(cdf, y, grid)
    if direction == "decreasing":
        if monotonize:
            prof = pava(prof, increasing=False)
        hit = np.flatnonzero(prof >= u)
    elif direction == "increasing":
        if monotonize:
            prof = pava(prof, increasing=True)
        hit = np.flatnonzero(prof <= u)
    else:
        raise ConfigurationError(f"unknown direction {direction!r}")
    if hit.size == 0:
        return Quantile(float(grid[0]), True)
    k = int(hit[-1])
    return Quantile(float(grid[k]), k == grid.size - 1)
