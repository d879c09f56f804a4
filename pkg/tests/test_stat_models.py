import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from fcbench.models import (
    ArimaForecaster,
    ArimaSpec,
    EtsForecaster,
    NaiveForecaster,
    SeasonalNaiveForecaster,
    ThetaForecaster,
    arima_forecast,
    ets_forecast,
    fit_arima,
    fit_arima_auto,
    fit_ets,
    fit_ets_auto,
    naive_forecast,
    snaive_forecast,
    theta_forecast,
)
from fcbench.models.arima import _fit_cell, ar_is_stationary, choose_d, css
from fcbench.models.theta import drift_term


def simulate_ar1(phi, n, seed):
    np.random.seed(seed)
    e = np.random.normal(size=n)
    y = np.zeros(n)
    for t in range(1, n):
        y[t] = phi * y[t - 1] + e[t]
    return y


def yule_walker_ar1(y):
    d = y - y.mean()
    return float(d[:-1] @ d[1:] / (d @ d))


# --- naive -----------------------------------------------------------------

def test_naive_repeats_last():
    np.testing.assert_array_equal(naive_forecast([1, 2, 3], 2), [3, 3])
    np.testing.assert_array_equal(naive_forecast([7], 1), [7])


def test_naive_empty_is_error():
    with pytest.raises(ValueError):
        naive_forecast([], 1)


def test_snaive_one_step():
    assert snaive_forecast(np.arange(1, 13), 4, 1)[0] == 9


def test_snaive_wraps_cycle():
    # y_{n+k-m*ceil(k/m)} with n=12, m=4, k=5 is y_9
    fc = snaive_forecast(np.arange(1, 13), 4, 5)
    np.testing.assert_array_equal(fc, [9, 10, 11, 12, 9])


def test_snaive_short_train_is_error():
    with pytest.raises(ValueError):
        snaive_forecast([1, 2], 4, 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=30), st.integers(1, 25))
def test_snaive_m1_equals_naive(values, h):
    np.testing.assert_array_equal(snaive_forecast(values, 1, h), naive_forecast(values, h))


# --- ARIMA -----------------------------------------------------------------

def test_arima_recovers_ar1():
    y = simulate_ar1(0.8, 1000, 42)
    spec = fit_arima_auto(y)
    yw = yule_walker_ar1(y)
    assert spec.d == 0 and spec.p >= 1
    assert abs(spec.phi[0] - 0.8) <= 0.05
    assert abs(spec.phi[0] - yw) <= 0.05


def _oracle_aic(w, p, q, d, cond):
    has_c = d == 0
    k = p + q + int(has_c)
    n_eff = len(w) - cond
    if k == 0:
        val = css(np.zeros(0), w, p, q, has_c, cond)
    else:
        res = optimize.minimize(
            lambda x: css(x, w, p, q, has_c, cond), np.zeros(k), method="Nelder-Mead",
            options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 20000, "maxfev": 20000},
        )
        val = res.fun
    return n_eff * np.log(val / n_eff) + 2 * (p + q + 1 + int(has_c))


def test_arima_white_noise_prefers_small_model():
    y = np.random.default_rng(3).normal(size=1000)
    spec = fit_arima_auto(y)
    assert spec.d == 0
    assert spec.p + spec.q <= 1
    fc = arima_forecast(spec, y, 1)[0]
    assert abs(fc - y.mean()) <= 0.15
    # an independent optimiser over the small cells agrees on the winner
    oracle = {(p, q): _oracle_aic(y, p, q, 0, 5) for p in range(2) for q in range(2)}
    best = min(oracle, key=oracle.get)
    assert (spec.p, spec.q) == best
    assert spec.aic == pytest.approx(oracle[best], abs=1e-3)


def test_arima_linear_trend_is_differenced():
    y = 2.0 * np.arange(1, 41)
    assert choose_d(y) >= 1
    assert fit_arima_auto(y).d >= 1


def test_arima_selected_aic_is_minimal():
    rng = np.random.default_rng(8)
    e = rng.normal(size=300)
    y = np.zeros(300)
    for t in range(2, 300):
        y[t] = 0.5 * y[t - 1] - 0.3 * y[t - 2] + e[t] + 0.4 * e[t - 1]
    spec = fit_arima_auto(y, max_p=3, max_q=3)
    for p in range(4):
        for q in range(4):
            cell = _fit_cell(y, p, q, 0, 3)
            if cell.converged and ar_is_stationary(cell.phi):
                assert spec.aic <= cell.aic + 1e-9


def test_arima_css_gradient_vanishes_at_optimum():
    y = simulate_ar1(0.8, 1000, 42)
    for p, q in [(1, 0), (1, 1), (2, 1)]:
        spec = fit_arima(y, p, 0, q, n_cond=5)
        loc = y.mean()
        # the optimiser works on the standardised series
        w = (y - loc) / y.std()
        c_std = (spec.c - loc * (1 - spec.phi.sum())) / y.std()
        x = np.r_[spec.phi, spec.theta, c_std]
        g = np.empty_like(x)
        for i in range(len(x)):
            h = 1e-6 * max(1, abs(x[i]))
            xp, xm = x.copy(), x.copy()
            xp[i] += h
            xm[i] -= h
            g[i] = (css(xp, w, p, q, True, 5) - css(xm, w, p, q, True, 5)) / (2 * h)
        assert np.max(np.abs(g)) < 1e-3


def test_arima_ar1_recursion():
    spec = ArimaSpec(1, 0, 0, np.array([0.5]), np.zeros(0), 0.0, 1.0, 0.0, n_cond=1)
    np.testing.assert_allclose(arima_forecast(spec, [3.0, 4.0], 3), [2, 1, 0.5])


def test_arima_random_walk_equals_naive():
    y = np.cumsum(np.random.default_rng(1).normal(size=50))
    spec = fit_arima(y, 0, 1, 0)
    assert spec.c == 0
    np.testing.assert_allclose(arima_forecast(spec, y, 5), naive_forecast(y, 5))


def test_arima_ma1_recursion():
    # a single observation with no conditioning makes its residual 2
    spec = ArimaSpec(0, 0, 1, np.zeros(0), np.array([0.5]), 0.0, 1.0, 0.0, n_cond=0)
    np.testing.assert_allclose(arima_forecast(spec, [2.0], 2), [1.0, 0.0])


def test_arima_second_difference_integrates():
    y = np.arange(1, 30) ** 2.0
    spec = fit_arima(y, 0, 2, 0)
    # no constant at d=2, so the last first-difference is carried forward
    fc = arima_forecast(spec, y, 2)
    last_step = y[-1] - y[-2]
    np.testing.assert_allclose(fc, [y[-1] + last_step, y[-1] + 2 * last_step])


def test_arima_stationarity_check():
    assert ar_is_stationary([0.5])
    assert not ar_is_stationary([1.2])
    assert not ar_is_stationary([0.5, 0.6])


def test_arima_short_train():
    with pytest.raises(ValueError):
        fit_arima_auto(np.arange(10.0))
    fc = ArimaForecaster().fit(np.arange(15.0)).forecast(3)
    assert fc.shape == (3,) and np.isfinite(fc).all()


# --- ETS -------------------------------------------------------------------

def test_ets_constant_series():
    spec = fit_ets_auto(np.full(30, 5.0))
    np.testing.assert_allclose(ets_forecast(spec, 7), 5.0)


def test_ets_linear_trend():
    y = 3.0 * np.arange(1, 201)
    spec = fit_ets_auto(y)
    oracle = 3.0 * 201  # direct linear extrapolation
    assert spec.error_trend in ("AAN", "AAdN")
    assert abs(ets_forecast(spec, 1)[0] - oracle) <= 0.5


def test_ets_fixed_alpha_recursion():
    y = np.tile([0.0, 1.0], 30)
    spec = fit_ets(y, "ANN", alpha=0.5)
    level = y[0]
    for v in y[1:]:
        level = level + 0.5 * (v - level)
    assert abs(spec.level - level) < 1e-6


def test_ets_aic_prefers_simple_smoothing():
    rng = np.random.default_rng(123)
    wins = 0
    for _ in range(200):
        e = rng.normal(size=500)
        level = 10.0
        y = np.empty(500)
        for t in range(500):
            y[t] = level + e[t]
            level += 0.3 * e[t]
        wins += fit_ets_auto(y).error_trend == "ANN"
    assert wins > 100


def test_ets_spec_fields_match_form():
    y = np.cumsum(np.random.default_rng(4).normal(size=80)) + 50
    for kind in ("ANN", "AAN", "AAdN"):
        spec = fit_ets(y, kind)
        assert (spec.beta is not None) == (kind != "ANN")
        assert (spec.phi_damp is not None) == (kind == "AAdN")
        assert 0 < spec.alpha < 1
        if spec.phi_damp is not None:
            assert 0.8 < spec.phi_damp < 1


# --- Theta -----------------------------------------------------------------

def two_theta_lines(y, h):
    """Classical decomposition: average of the theta=0 and theta=2 line forecasts."""
    n = len(y)
    t = np.arange(n)
    b, a = np.polyfit(t, y, 1)
    line0 = a + b * np.arange(n, n + h)
    line2 = 2 * y - (a + b * t)
    # SES on theta line 2 with alpha optimised by a fine grid
    best = None
    for alpha in np.linspace(0.01, 0.999, 500):
        lev, sse = line2[0], 0.0
        for v in line2[1:]:
            sse += (v - lev) ** 2
            lev += alpha * (v - lev)
        if best is None or sse < best[0]:
            best = (sse, lev)
    return 0.5 * (line0 + best[1])


def test_theta_constant():
    np.testing.assert_allclose(theta_forecast(np.full(20, 4.0), 1, 5), 4.0)


def test_theta_matches_two_line_oracle():
    y = 10 + 2 * np.arange(1, 501, dtype=float)
    ours = theta_forecast(y, 1, 1)[0]
    assert abs(ours - two_theta_lines(y, 1)[0]) <= 0.2


def test_theta_drift_limit():
    steps = np.arange(1, 6)
    np.testing.assert_allclose(drift_term(4.0, 1 - 1e-12, 100, steps), 2.0 * steps, rtol=1e-9)


# --- contract --------------------------------------------------------------

@pytest.mark.parametrize(
    "forecaster",
    [NaiveForecaster(), SeasonalNaiveForecaster(), ArimaForecaster(), EtsForecaster(), ThetaForecaster()],
)
def test_forecaster_contract(forecaster):
    y = 50 + np.cumsum(np.random.default_rng(9).normal(size=60))
    a = forecaster.fit(y, 4).forecast(18)
    b = forecaster.fit(y, 4).forecast(18)
    assert a.shape == (18,) and np.isfinite(a).all()
    np.testing.assert_array_equal(a, b)
    assert isinstance(forecaster.fit(y, 4).describe(), str)
