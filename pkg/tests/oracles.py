"""Independent reference implementations used only by the tests.

Every product-limit estimator is re-evaluated here by looping over records
and enumerating risk sets explicitly, without the cumulative-sum engine
of the library.  Intended for tiny, tie-free datasets.
"""

import math

import numpy as np


def uniform_weight(h, x, xi):
    return 0.5 / h if abs(x - xi) <= h else 0.0


def epanechnikov_weight(h, x, xi):
    u = (x - xi) / h
    return 0.75 * (1 - u * u) / h if abs(u) <= 1 else 0.0


def weights(kfun, h, x, xs):
    return [kfun(h, x, xi) for xi in xs]


def ecdf(values, y):
    return sum(v <= y for v in values) / len(values)


def kaplan_meier(z, delta, y):
    """Kaplan-Meier survival at ``y``; deaths precede censorings at tied times."""
    surv = 1.0
    for t in sorted({zi for zi, di in zip(z, delta) if di == 1}):
        if t > y:
            break
        deaths = sum(1 for zi, di in zip(z, delta) if zi == t and di == 1)
        at_risk = sum(1 for zi in z if zi >= t)
        surv *= 1.0 - deaths / at_risk
    return surv


def _factor(num, den):
    return 1.0 - (num / den if den > 0 else 0.0)


def lt_cdf(w, t, y, yy):
    """``1 - prod_{Y_i <= yy} (1 - w_i / sum_j w_j 1{T_j <= Y_i <= Y_j})``."""
    prod = 1.0
    for i in range(len(y)):
        if y[i] <= yy and w[i] > 0:
            den = sum(w[j] for j in range(len(y)) if t[j] <= y[i] <= y[j])
            prod *= _factor(w[i], den)
    return 1.0 - prod


def ltrc_survival(w, t, z, d, yy):
    prod = 1.0
    for i in range(len(z)):
        if d[i] == 1 and z[i] <= yy and w[i] > 0:
            den = sum(w[j] for j in range(len(z)) if t[j] <= z[i] <= z[j])
            prod *= _factor(w[i], den)
    return prod


def rt_cdf(w, y, c, yy):
    """``prod_{Y_i > yy} (1 - w_i / sum_j w_j 1{Y_j <= Y_i <= C_j})``."""
    prod = 1.0
    for i in range(len(y)):
        if y[i] > yy and w[i] > 0:
            den = sum(w[j] for j in range(len(y)) if y[j] <= y[i] <= c[j])
            prod *= _factor(w[i], den)
    return prod


def c_survival(y, c, s):
    """``prod_{C_i <= s} (1 - 1 / #{j : Y_j <= C_i <= C_j})``."""
    prod = 1.0
    for i in range(len(c)):
        if c[i] <= s:
            den = sum(1 for j in range(len(c)) if y[j] <= c[i] <= c[j])
            prod *= _factor(1.0, den)
    return prod


def t_cdf(t, y, s):
    """``prod_{T_i > s} (1 - 1 / #{j : T_j <= T_i <= Y_j})``."""
    prod = 1.0
    for i in range(len(t)):
        if t[i] > s:
            den = sum(1 for j in range(len(t)) if t[j] <= t[i] <= y[j])
            prod *= _factor(1.0, den)
    return prod


def dt_H_survival(w, t, y, c, yy):
    prod = 1.0
    for i in range(len(y)):
        if y[i] <= yy and w[i] > 0:
            den = sum(w[j] for j in range(len(y)) if t[j] <= y[i] <= y[j] <= c[j])
            prod *= _factor(w[i], den)
    return prod


def dt_cdf(w, t, y, c, yy, normalize=True):
    """``sum_{Y_i <= yy} (H(Y_i-) - H(Y_i)) / Fbar_C(Y_i)``, optionally divided by its total."""
    order = sorted(range(len(y)), key=lambda i: y[i])
    total = 0.0
    upto = 0.0
    for i in order:
        left = _h_left(w, t, y, c, y[i])
        jump = left - dt_H_survival(w, t, y, c, y[i])
        fc = c_survival(y, c, y[i])
        contrib = jump / fc if fc > 0 else 0.0
        total += contrib
        if y[i] <= yy:
            upto += contrib
    if normalize:
        return upto / total
    return min(max(upto, 0.0), 1.0)


def _h_left(w, t, y, c, v):
    prod = 1.0
    for i in range(len(y)):
        if y[i] < v and w[i] > 0:
            den = sum(w[j] for j in range(len(y)) if t[j] <= y[i] <= y[j] <= c[j])
            prod *= _factor(w[i], den)
    return prod


def isotonic_exhaustive(values, weights):
    """Best nondecreasing least-squares fit by enumerating every contiguous block partition.

    The optimum is constant on blocks and equals the block's weighted mean,
    so searching all ``2**(n-1)`` partitions whose block means increase
    finds it exactly.
    """
    import itertools

    values = np.asarray(values, float)
    weights = np.asarray(weights, float)
    n = len(values)
    best, best_sse = None, math.inf
    for cuts in itertools.product((False, True), repeat=n - 1):
        fit = np.empty(n)
        start = 0
        means = []
        for k in range(n):
            if k == n - 1 or cuts[k]:
                seg = slice(start, k + 1)
                m = float(np.sum(weights[seg] * values[seg]) / np.sum(weights[seg]))
                fit[seg] = m
                means.append(m)
                start = k + 1
        if any(b < a for a, b in zip(means, means[1:])):
            continue
        sse = float(np.sum(weights * (fit - values) ** 2))
        if sse < best_sse:
            best, best_sse = fit, sse
    return best, best_sse
