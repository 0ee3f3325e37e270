import inspect

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats
from sklearn.isotonic import IsotonicRegression

from partobs.bernoulli import (
    BernoulliFit,
    BinarySample,
    bias_forward,
    debias_probability,
    estimate_alpha,
    estimate_theta_gamma,
    fit_debiased,
    fit_debiased_at,
    fit_discrete_mle,
    fit_kernel,
    fit_kernel_grid,
    invert_monotone,
    monotonize,
    sampled_control_fraction,
)
from partobs.errors import ConfigurationError, DataError, DegenerateInputError, NotEstimableError
from partobs.isotonic import is_monotone, pava
from partobs.kernels import Kernel
from partobs.simulation import DesignTruth, preset, simulate_design, truncation_lambdas


def test_discrete_mle_counts():
    s = BinarySample([1, 1, 2], [1, 0, 1])
    assert fit_discrete_mle(s).as_dict() == {1.0: 0.5, 2.0: 1.0}
    s0 = BinarySample([1, 2, 2, 3], [0, 0, 0, 0])
    assert np.all(fit_discrete_mle(s0).values == 0)
    with pytest.raises(DegenerateInputError):
        fit_discrete_mle(BinarySample([], []))


def test_discrete_mle_binomial_band():
    rng = np.random.default_rng(11)
    y = (rng.random(200) < 0.4).astype(float)
    val = fit_discrete_mle(BinarySample(np.full(200, 0.3), y)).values[0]
    assert abs(val - 0.4) <= 3 * np.sqrt(0.4 * 0.6 / 200)


def test_discrete_mle_ignores_unsampled_rows():
    s = BinarySample([1, 1, 1], [1, 0, 0], [1, 1, 0])
    assert fit_discrete_mle(s).as_dict() == {1.0: 0.5}


def test_sample_validation():
    with pytest.raises(DataError):
        BinarySample([0, 1], [0, 2])
    with pytest.raises(DataError):
        BinarySample([0, 1], [0, 1], [1, 0.5])
    with pytest.raises(DataError):
        BinarySample([0, 1], [0])


def test_kernel_fit_examples():
    xs = np.linspace(0, 1, 11)
    assert fit_kernel(BinarySample(xs, np.ones(11)), Kernel(), 0.2, 0.5) == 1.0
    one = BinarySample([0.0, 0.5, 1.0], [1, 0, 1])
    # only the middle record is within h = 0.1 of 0.5
    assert fit_kernel(one, Kernel("uniform"), 0.1, 0.5) == 0.0
    xs5 = np.array([0.1, 0.4, 0.5, 0.8, 0.9])
    y5 = np.array([1, 0, 1, 1, 0])
    s5 = BinarySample(xs5, y5)
    wide = fit_kernel(s5, Kernel("uniform"), 10.0, 0.5, window_check=False)
    collapsed = fit_discrete_mle(BinarySample(np.zeros(5), y5)).values[0]
    assert wide == pytest.approx(collapsed, abs=1e-15)
    assert wide == pytest.approx(y5.mean(), abs=1e-15)


def test_kernel_fit_zero_mass():
    s = BinarySample([0.0, 0.05, 0.95, 1.0], [1, 0, 1, 0])
    with pytest.raises(NotEstimableError):
        fit_kernel(s, Kernel(), 0.1, 0.5, window_check=True)


def test_theta_gamma_examples():
    assert estimate_theta_gamma(BinarySample([0, 1, 2], [1, 1, 1])) == 0.0
    half = BinarySample([0, 1, 2, 3], [1, 0, 1, 0])
    assert estimate_theta_gamma(half) == 1.0
    assert sampled_control_fraction(half) == 0.5
    assert estimate_theta_gamma(BinarySample([0, 1], [0, 0])) == np.inf
    with pytest.raises(DegenerateInputError):
        estimate_theta_gamma(BinarySample([0, 1], [1, 0], [0, 0]))


def test_alpha_examples():
    s = BinarySample([1, 1, 1, 1, 2], [1, 1, 0, 0, 0])
    assert estimate_alpha(s, 1.0) == 1.0
    assert estimate_alpha(BinarySample([1, 1], [1, 1]), 1.0) == 0.0
    assert estimate_alpha(s, 2.0) == np.inf
    with pytest.raises(NotEstimableError):
        estimate_alpha(s, 3.0)


def test_alpha_recovered_in_simulation():
    truth = DesignTruth(stats.uniform(0, 1), p=lambda x: 0.5 + 0 * np.asarray(x), lambda0=0.8, lambda1=0.4)
    sim = simulate_design(truth, "case_control", 4000, 5)
    a = estimate_alpha(sim.sample, 0.5, Kernel(), 0.1)
    # about 4000 * 0.2 sampled records in the window; alpha = 2
    assert abs(a - 2.0) < 0.35


def test_debias_examples():
    assert debias_probability(0.3, 1.0) == pytest.approx(0.3, abs=1e-15)
    assert debias_probability(0.0, 2.0) == 0.0
    assert debias_probability(1.0, 2.0) == 1.0
    assert debias_probability(0.5, 2.0) == pytest.approx(2 / 3, abs=1e-15)
    assert bias_forward(2 / 3, 2.0) == pytest.approx(0.5, abs=1e-15)
    assert bias_forward(0.4, 1.0) == pytest.approx(0.4, abs=1e-15)


def test_debias_inverts_bias_forward_on_grid():
    p = np.linspace(0, 1, 100)[:, None]
    theta = np.geomspace(1e-2, 1e2, 100)[None, :]
    back = debias_probability(bias_forward(p, theta), theta)
    assert np.max(np.abs(back - p)) < 1e-12


@given(st.floats(0, 1), st.floats(1e-3, 1e3))
def test_debias_round_trip_property(p, theta):
    assert abs(debias_probability(bias_forward(p, theta), theta) - p) < 1e-12


def test_theta_is_required():
    s = BinarySample([0, 1], [1, 0])
    with pytest.raises(ConfigurationError):
        fit_debiased(s, None)
    with pytest.raises(ConfigurationError):
        debias_probability(0.5, None)
    for theta in (0.0, -1.0, np.inf):
        with pytest.raises(ConfigurationError):
            fit_debiased(s, theta)
    sig = inspect.signature(fit_debiased)
    assert sig.parameters["theta"].default is inspect.Parameter.empty


def test_theta_one_reduces_exactly():
    rng = np.random.default_rng(2)
    x = rng.integers(0, 5, 300).astype(float)
    y = (rng.random(300) < 0.3).astype(float)
    s = (rng.random(300) < 0.7).astype(float)
    sample = BinarySample(x, y, s)
    assert np.array_equal(fit_debiased(sample, 1.0).values, fit_discrete_mle(sample).values)
    xc = rng.uniform(size=300)
    cont = BinarySample(xc, y, s)
    grid = np.linspace(0.2, 0.8, 13)
    a = fit_debiased(cont, 1.0, Kernel(), 0.1, grid).values
    b = fit_kernel_grid(cont, Kernel(), 0.1, grid).values
    assert np.array_equal(a, b)


def test_debiased_all_cases():
    s = BinarySample([0.0, 0.5, 1.0], [1, 1, 1])
    assert np.all(fit_debiased(s, 3.0).values == 1.0)


def test_case_control_recovery():
    truth = preset("case_control")
    sim = simulate_design(truth, "case_control", 5000, 17)
    grid = np.linspace(0.15, 0.85, 15)
    fit = fit_debiased(sim.sample, truth.theta, Kernel(), 0.1, grid)
    err = np.max(np.abs(fit.values - truth.p(grid)))
    assert err < 0.08
    naive = fit_kernel_grid(sim.sample, Kernel(), 0.1, grid).values
    assert np.max(np.abs(naive - truth.p(grid))) > 0.1
    assert fit_debiased_at(sim.sample, truth.theta, Kernel(), 0.1, 0.5) == pytest.approx(fit(0.5))


def test_theta_gamma_binomial_band():
    truth = preset("case_control")
    pbar = float(np.mean(truth.p(np.linspace(0, 1, 100001))))
    target = truth.theta * (1 - pbar) / pbar
    q = target / (1 + target)
    for seed in range(5):
        sim = simulate_design(truth, "case_control", 10_000, seed)
        se = np.sqrt(q * (1 - q) / 10_000) / (1 - q) ** 2
        assert abs(estimate_theta_gamma(sim.sample) - target) < 3 * se


def test_x_truncated_design():
    truth = preset("x_truncated")
    lam0, lam1, theta = truncation_lambdas(truth)
    sim = simulate_design(truth, "x_truncated", 8000, 4)
    assert sim.sample.x.min() >= 0.2 and sim.sample.x.max() <= 0.8
    grid = np.linspace(0.3, 0.7, 9)
    direct = fit_kernel_grid(sim.sample, Kernel(), 0.08, grid).values
    assert np.max(np.abs(direct - truth.p(grid))) < 0.06
    # theta corrects the marginal odds, not p(x): sampled odds / theta recovers gamma
    xs = np.linspace(0, 1, 200001)
    pbar = float(np.mean(truth.p(xs)))
    gamma = (1 - pbar) / pbar
    assert estimate_theta_gamma(sim.sample) / theta == pytest.approx(gamma, abs=0.08)


def test_monotonize_examples():
    fit = BernoulliFit("discrete_grid", np.array([0.0, 1, 2]), np.array([0.2, 0.4, 0.3]), np.ones(3))
    assert np.allclose(monotonize(fit).values, [0.2, 0.35, 0.35], atol=1e-15)
    mono = BernoulliFit("discrete_grid", np.array([0.0, 1, 2]), np.array([0.1, 0.2, 0.9]), np.ones(3))
    assert np.array_equal(monotonize(mono).values, mono.values)
    const = BernoulliFit("discrete_grid", np.array([0.0, 1, 2]), np.full(3, 0.4), np.ones(3))
    assert np.array_equal(monotonize(const).values, const.values)
    assert np.array_equal(monotonize(const, "decreasing").values, const.values)


@given(
    arrays(float, st.integers(1, 12), elements=st.floats(0, 1)),
    st.sampled_from(["increasing", "decreasing"]),
)
def test_monotonize_properties(vals, direction):
    w = np.linspace(1, 2, vals.size)
    fit = BernoulliFit("kernel", np.arange(vals.size, dtype=float), vals, w)
    once = monotonize(fit, direction)
    assert is_monotone(once.values, direction == "increasing")
    assert np.array_equal(monotonize(once, direction).values, once.values)
    assert np.all((once.values >= 0) & (once.values <= 1))
    if is_monotone(vals, direction == "increasing"):
        assert np.array_equal(once.values, vals)
    else:
        assert not np.array_equal(once.values, vals)


@given(
    arrays(float, st.integers(1, 15), elements=st.floats(-10, 10)),
    st.booleans(),
)
def test_pava_matches_sklearn(vals, increasing):
    w = 1.0 + np.abs(np.sin(np.arange(vals.size)))
    ours = pava(vals, w, increasing)
    ref = IsotonicRegression(increasing=increasing).fit_transform(np.arange(vals.size), vals, sample_weight=w)
    assert np.allclose(ours, ref, atol=1e-9)


def test_invert_monotone_examples():
    fit = BernoulliFit("discrete_grid", np.array([0.0, 1, 2]), np.array([0.1, 0.5, 0.9]), np.ones(3))
    assert invert_monotone(fit, 0.5) == (1.0, False)
    assert invert_monotone(fit, 0.05) == (0.0, True)
    assert invert_monotone(fit, 0.95) == (2.0, True)
    dec = BernoulliFit("discrete_grid", np.array([0.0, 1, 2]), np.array([0.9, 0.5, 0.1]), np.ones(3))
    assert invert_monotone(dec, 0.5, "decreasing") == (1.0, False)
    assert invert_monotone(dec, 0.95, "decreasing").boundary
    with pytest.raises(DegenerateInputError):
        invert_monotone(BernoulliFit("kernel", np.array([]), np.array([]), np.array([])), 0.5)


@given(arrays(float, st.integers(2, 20), elements=st.floats(0, 1), unique=True))
def test_invert_round_trip_on_grid(vals):
    vals = np.sort(vals)
    grid = np.linspace(-1, 1, vals.size)
    fit = BernoulliFit("kernel", grid, vals, np.ones(vals.size))
    for g, v in zip(grid, vals):
        assert invert_monotone(fit, v).value == g
    dfit = BernoulliFit("kernel", grid, vals[::-1], np.ones(vals.size))
    for g, v in zip(grid, vals[::-1]):
        assert invert_monotone(dfit, v, "decreasing").value == g
