"""Weighted pool-adjacent-violators algorithm."""

from __future__ import annotations

import numpy as np


def pava(values, weights=None, increasing: bool = True) -> np.ndarray:
    """Weighted least-squares projection of ``values`` onto monotone sequences.

    Blocks that never pool keep their input value bit for bit, so a
    sequence that is already monotone is returned unchanged.  Entries with
    zero weight are pooled with their neighbours and receive the block
    mean.
    """
    y = np.asarray(values, dtype=float)
    n = y.size
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != y.shape:
        raise ValueError("values and weights must have the same shape")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    if n == 0:
        return y.copy()
    if not increasing:
        return -pava(-y, w, True)

    means: list[float] = []
    wsum: list[float] = []
    size: list[int] = []
    for i in range(n):
        means.append(y[i])
        wsum.append(w[i])
        size.append(1)
        while len(means) > 1 and means[-2] > means[-1]:
            m2, w2, s2 = means.pop(), wsum.pop(), size.pop()
            m1, w1 = means[-1], wsum[-1]
            tot = w1 + w2
            means[-1] = (w1 * m1 + w2 * m2) / tot if tot > 0 else 0.5 * (m1 + m2)
            wsum[-1] = tot
            size[-1] += s2
    return np.repeat(np.asarray(means), size)


def is_monotone(values, increasing: bool = True) -> bool:
    d = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(d >= 0) if increasing else np.all(d <= 0))
