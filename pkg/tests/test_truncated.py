import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import oracles
from partobs.errors import ConfigurationError, DataError, DegenerateInputError, NotEstimableError
from partobs.kernels import Kernel, kernel_weight
from partobs.simulation import preset, simulate_design
from partobs.step import StepDistribution
from partobs.truncated import (
    LeftTruncatedSample,
    conditional_cdf,
    conditional_cdf_estimate,
    estimate_A,
    estimate_B,
    marginal_survival_Y,
    mean_T,
    mean_Y,
    regression_mean,
    residual_cdf,
    truncation_cdf_T,
)

U = Kernel("uniform")


def wide(sample):
    """Uniform kernel covering every record, evaluated at the covariate midpoint."""
    x0 = float(np.mean(sample.x)) if len(sample) else 0.0
    return dict(kernel=U, h=100.0, x=x0, window_check=False)


def random_lt(rng, n):
    x = rng.uniform(size=n)
    y = rng.normal(size=n)
    t = y - rng.exponential(size=n) * rng.integers(0, 2, n) * 2 - 0.1 * rng.random(n)
    t = np.where(rng.random(n) < 0.5, t, rng.normal(size=n) - 1.0)
    t = np.minimum(t, y)
    return LeftTruncatedSample(x, t, y)


def test_validation():
    with pytest.raises(DataError, match="t <= y"):
        LeftTruncatedSample([0.0], [2.0], [1.0])
    with pytest.raises(DataError):
        LeftTruncatedSample([0.0, 1.0], [0.0], [1.0])


def test_A_B_examples():
    s = LeftTruncatedSample([0.0, 0.5, 1.0], [0.0, 0.5, 1.5], [1.0, 2.0, 3.0])
    kw = dict(window_check=False)
    assert estimate_A(s, U, 10, 3.0, 0.5, **kw) == 1.0
    assert estimate_A(s, U, 10, 0.5, 0.5, **kw) == 0.0
    assert estimate_A(s, U, 10, 2.0, 0.5, **kw) == pytest.approx(2 / 3, abs=1e-15)
    assert estimate_B(s, U, 10, -1.0, 0.5, **kw) == 0.0
    assert estimate_B(s, U, 10, 1.0, 0.5, **kw) == pytest.approx(2 / 3, abs=1e-15)  # records 1, 2
    assert estimate_B(s, U, 10, 1.7, 0.5, **kw) == pytest.approx(2 / 3, abs=1e-15)  # records 2, 3
    single = LeftTruncatedSample([0.0], [0.0], [2.0])
    assert estimate_B(single, U, 1, 1.0, 0.0, **kw) == 1.0
    assert np.allclose(estimate_A(s, U, 10, [0.0, 1.0, 3.0], 0.5, **kw), [0, 1 / 3, 1])


def test_brute_force_count_A_B():
    rng = np.random.default_rng(0)
    for _ in range(30):
        s = random_lt(rng, 3)
        for yy in np.linspace(-3, 3, 13):
            a = sum((s.t <= s.y) & (s.y <= yy)) / 3
            b = sum((s.t <= yy) & (yy <= s.y)) / 3
            assert estimate_A(s, U, 100, yy, 0.5, window_check=False) == pytest.approx(a, abs=1e-15)
            assert estimate_B(s, U, 100, yy, 0.5, window_check=False) == pytest.approx(b, abs=1e-15)


def test_single_record():
    s = LeftTruncatedSample([0.0], [-1.0], [1.5])
    d = conditional_cdf(s, U, 1, 0.0, window_check=False)
    assert np.array_equal(d.locations, [1.5]) and np.array_equal(d.cdf_values, [1.0])
    assert regression_mean(s, U, 1, 0.0, window_check=False) == 1.5


def test_hand_dataset_three_records():
    s = LeftTruncatedSample([0.0, 0.5, 1.0], [0.0, 0.5, 1.5], [1.0, 2.0, 3.0])
    d = conditional_cdf(s, **{k: v for k, v in wide(s).items()})
    # risk sets: Y=1 -> {1,2}; Y=2 -> {2,3}; Y=3 -> {3}
    assert np.allclose(d.cdf_values, [0.5, 0.75, 1.0], atol=1e-12)
    w = [0.5 / 100] * 3
    for yy in [0.5, 1.0, 1.5, 2.0, 3.0]:
        assert d.cdf(yy) == pytest.approx(oracles.lt_cdf(w, s.t, s.y, yy), abs=1e-12)


def test_empirical_reduction():
    rng = np.random.default_rng(1)
    for n in (1, 2, 5, 8, 30):
        y = rng.normal(size=n)
        s = LeftTruncatedSample(rng.uniform(size=n), np.full(n, -np.inf), y)
        d = conditional_cdf(s, **wide(s))
        for yy in np.concatenate([y, y - 1e-9, [-10, 10]]):
            assert d.cdf(yy) == pytest.approx(oracles.ecdf(y, yy), abs=1e-12)
        assert regression_mean(s, **wide(s)) == pytest.approx(y.mean(), abs=1e-12)
        assert mean_Y(s) == pytest.approx(y.mean(), abs=1e-12)
        assert np.allclose(marginal_survival_Y(s).survival(y), [1 - oracles.ecdf(y, v) for v in y], atol=1e-12)


def test_brute_force_oracle_small_datasets():
    rng = np.random.default_rng(2)
    k = Kernel("epanechnikov")
    for trial in range(150):
        n = 1 + trial % 6
        s = random_lt(rng, n)
        x0, h = 0.5, 0.6
        w = oracles.weights(oracles.epanechnikov_weight, h, x0, s.x)
        if sum(w) == 0:
            continue
        d = conditional_cdf(s, k, h, x0, window_check=False)
        ones = [1.0] * n
        marg = marginal_survival_Y(s)
        tcdf = truncation_cdf_T(s)
        for yy in np.concatenate([s.y, s.t, [-9.0, 9.0]]):
            assert d.cdf(yy) == pytest.approx(oracles.lt_cdf(w, s.t, s.y, yy), abs=1e-12)
            assert marg.survival(yy) == pytest.approx(1 - oracles.lt_cdf(ones, s.t, s.y, yy), abs=1e-12)
            assert tcdf.cdf(yy) == pytest.approx(oracles.t_cdf(s.t, s.y, yy), abs=1e-12)


def test_zero_over_zero_convention():
    # the record at y = 5 is isolated in x: zero kernel weight, so no factor
    s = LeftTruncatedSample([0.0, 0.1, 0.2, 3.0], [0.0, 0.0, 0.0, 4.0], [1.0, 2.0, 3.0, 5.0])
    d = conditional_cdf(s, U, 0.5, 0.1, window_check=False)
    assert 5.0 not in d.locations
    assert d.cdf(10.0) == 1.0
    # a jump whose risk set is only itself gives factor 0 and not 0/0
    m = marginal_survival_Y(LeftTruncatedSample([0, 1], [0, 2], [1, 3]))
    assert m.survival(1.0) == 0.0


def test_marginal_hand_example_defect():
    s = LeftTruncatedSample([0.0, 1.0], [0.0, 2.0], [1.0, 3.0])
    m = marginal_survival_Y(s)
    assert m.survival(0.99) == 1.0
    assert m.survival(1.0) == 0.0
    assert m.survival(3.0) == 0.0
    # all mass sits at y = 1: the record at 3 is invisible to the product
    assert m.cdf(3.0) == 1.0 and m.masses[1] == 0.0


def test_truncation_cdf_examples():
    s = LeftTruncatedSample([0.0, 1.0, 2.0], [0.5, 0.5, 0.5], [1.0, 2.0, 3.0])
    f = truncation_cdf_T(s)
    assert np.array_equal(f.locations, [0.5]) and f.cdf(0.5) == 1.0 and f.cdf(0.49) == 0.0
    two = LeftTruncatedSample([0.0, 1.0], [0.0, 1.0], [2.0, 3.0])
    g = truncation_cdf_T(two)
    # T=1: risk {j: T_j <= 1 <= Y_j} = {1, 2} -> factor 1/2
    assert g.cdf(0.0) == pytest.approx(0.5) and g.cdf(1.0) == 1.0
    assert mean_T(two) == pytest.approx(0.5)
    with pytest.raises(DegenerateInputError):
        truncation_cdf_T(LeftTruncatedSample([], [], []))


def test_single_record_means():
    s = LeftTruncatedSample([0.0], [-0.3], [2.5])
    assert mean_T(s) == -0.3
    assert mean_Y(s) == 2.5


def test_window_enforced():
    s = LeftTruncatedSample(np.linspace(0, 1, 11), np.zeros(11), np.ones(11))
    with pytest.raises(ConfigurationError):
        conditional_cdf(s, Kernel(), 0.2, 0.05)
    est = conditional_cdf_estimate(s, Kernel(), 0.2)
    assert est.window == pytest.approx((0.2, 0.8))
    with pytest.raises(ConfigurationError):
        est.evaluate(1.0, 0.9)


def test_zero_kernel_mass():
    s = LeftTruncatedSample([0.0, 0.1, 0.9, 1.0], np.zeros(4), np.ones(4))
    with pytest.raises(NotEstimableError):
        conditional_cdf(s, Kernel(), 0.05, 0.5, window_check=False)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 40), st.floats(-5, 5))
def test_slice_invariants(seed, n, shift):
    rng = np.random.default_rng(seed)
    s = random_lt(rng, n)
    k, h, x0 = Kernel(), 0.5, 0.5
    if np.sum(kernel_weight(k, h, x0, s.x)) == 0:
        return
    d = conditional_cdf(s, k, h, x0, window_check=False)
    assert np.all(np.diff(d.cdf_values) >= 0)
    assert np.all((d.cdf_values >= 0) & (d.cdf_values <= 1))
    assert set(d.locations) <= set(s.y)
    # translation equivariance
    d2 = conditional_cdf(s.shifted(shift), k, h, x0, window_check=False)
    assert np.allclose(d2.locations, d.locations + shift, atol=1e-12)
    assert np.allclose(d2.masses, d.masses, atol=1e-12)
    # kernel locality: far-away records change nothing
    far = LeftTruncatedSample(
        np.concatenate([s.x, [50.0, 60.0]]), np.concatenate([s.t, [-1.0, 0.0]]), np.concatenate([s.y, [0.0, 0.5]])
    )
    d3 = conditional_cdf(far, k, h, x0, window_check=False)
    assert np.array_equal(d3.locations, d.locations)
    assert np.allclose(d3.cdf_values, d.cdf_values, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 25))
def test_constant_kernel_equals_marginal(seed, n):
    s = random_lt(np.random.default_rng(seed), n)
    d = conditional_cdf(s, **wide(s))
    m = marginal_survival_Y(s)
    assert np.array_equal(d.locations, m.locations)
    assert np.allclose(d.survival(d.locations), m.survival(m.locations), atol=1e-12)


def test_residual_cdf_single_and_shift():
    s = LeftTruncatedSample([0.0], [0.0], [1.25])
    r = residual_cdf(s, U, 1.0, window_check=False)
    assert np.array_equal(r.locations, [0.0]) and r.cdf(0.0) == 1.0
    rng = np.random.default_rng(4)
    s = random_lt(rng, 40)
    m_hat = lambda x: 0.3 + x  # noqa: E731
    r1 = residual_cdf(s, Kernel(), 0.3, m_hat)
    r2 = residual_cdf(s.shifted(2.5), Kernel(), 0.3, lambda x: m_hat(x) + 2.5)
    grid = np.linspace(-3, 3, 61)
    assert np.max(np.abs(r1.cdf(grid) - r2.cdf(grid))) < 1e-12
    assert r1.notes["skipped"] > 0


def test_jump_sum_matches_survival_times_hazard():
    # jump at Y_i equals S(Y_i-) * w_i / D(Y_i), the second form of the mean
    s = random_lt(np.random.default_rng(8), 12)
    w = oracles.weights(oracles.uniform_weight, 100, 0.5, s.x)
    d = conditional_cdf(s, **wide(s))
    alt = 0.0
    for i in np.argsort(s.y):
        den = sum(w[j] for j in range(12) if s.t[j] <= s.y[i] <= s.y[j])
        left = 1 - oracles.lt_cdf(w, s.t, s.y, s.y[i] - 1e-12)
        alt += s.y[i] * left * w[i] / den
    assert d.mean() == pytest.approx(alt, abs=1e-12)


def test_simulated_marginals():
    truth = preset("left_truncated")
    sim = simulate_design(truth, "left_truncated", 2000, 21)
    m = marginal_survival_Y(sim.sample)
    ys = np.linspace(-0.5, 3.5, 81)
    true_FY = np.array([float(np.mean(truth.F(v, np.linspace(0, 1, 2001)))) for v in ys])
    assert np.max(np.abs((1 - m.survival(ys)) - true_FY)) < 0.05

    tu = preset("left_truncated_uniform_t")
    simu = simulate_design(tu, "left_truncated", 2000, 22)
    f = truncation_cdf_T(simu.sample)
    ts = np.linspace(-1, 0, 51)
    assert np.max(np.abs(f.cdf(ts) - tu.t_dist.cdf(ts))) < 0.05


def test_residual_median_near_zero():
    sim = simulate_design(preset("left_truncated"), "left_truncated", 2000, 23)
    r = residual_cdf(sim.sample, Kernel(), 0.1)
    assert abs(r.cdf(0.0) - 0.5) < 0.05


def test_step_distribution_basics():
    d = StepDistribution(np.array([1.0, 2.0]), np.array([0.25, 0.75]))
    assert d.is_defective and d.defect == pytest.approx(0.25)
    assert d.cdf_left(2.0) == 0.25 and d.cdf(2.0) == 0.75
    assert d.quantile(0.9) == (2.0, True)
    assert d.quantile(0.25) == (1.0, False)
    assert d.mean() == pytest.approx(1.0 * 0.25 + 2.0 * 0.5)


def test_gaussian_slice_is_proper_cdf():
    rng = np.random.default_rng(5)
    n = 300
    x = rng.uniform(size=n)
    y = 1 + 2 * x + rng.normal(0, 0.5, n)
    t = stats.norm(-1, 1).rvs(n, random_state=rng)
    keep = t <= y
    s = LeftTruncatedSample(x[keep], t[keep], y[keep])
    d = conditional_cdf(s, Kernel("gaussian"), 0.1, 0.5)
    assert d.total == pytest.approx(1.0)
