import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import comb

from fcbench.transforms import (
    DiagnosticWarning,
    PreprocessOptions,
    TransformState,
    boxcox,
    cox_stuart_test,
    deseasonalize,
    difference,
    fit_pipeline,
    forward_values,
    guerrero_lambda,
    integrate,
    inv_boxcox,
    inverse_forecast,
    reseasonalize,
    seasonal_indices,
    seasonality_test,
)


# --- independent oracles ---------------------------------------------------

def grid_guerrero(y, m, lo=-1.0, hi=2.0, step=1e-3):
    """Dense grid over lambda with its own block statistics."""
    block = max(m, 2)
    nb = len(y) // block
    tail = y[len(y) - nb * block:]
    mus = [tail[i * block:(i + 1) * block].mean() for i in range(nb)]
    sds = [tail[i * block:(i + 1) * block].std(ddof=1) for i in range(nb)]
    best, best_cv = None, math.inf
    for lam in np.arange(lo, hi + step / 2, step):
        rat = np.array([s / mu ** (1 - lam) for s, mu in zip(sds, mus)])
        cv = rat.std(ddof=1) / rat.mean()
        if cv < best_cv:
            best, best_cv = lam, cv
    return best


def acf_lag(y, k):
    d = y - y.mean()
    return sum(d[t] * d[t + k] for t in range(len(y) - k)) / sum(d * d)


def binomial_two_sided(s, k):
    """Exact two-sided sign-test p-value by enumeration."""
    probs = [comb(k, i) * 0.5**k for i in range(k + 1)]
    return min(1.0, sum(p for p in probs if p <= probs[s] * (1 + 1e-7)))


# --- Box-Cox / Guerrero ----------------------------------------------------

def test_boxcox_log_case():
    np.testing.assert_allclose(boxcox([1, 2, 4], 0), [0, math.log(2), math.log(4)])


def test_boxcox_identity_shift():
    np.testing.assert_allclose(boxcox([3], 1), [2])


def test_boxcox_roundtrip():
    y = np.array([0.5, 1, 10, 300])
    np.testing.assert_allclose(inv_boxcox(boxcox(y, 0.37), 0.37), y, rtol=1e-10)


def test_boxcox_rejects_nonpositive():
    with pytest.raises(ValueError, match="shift"):
        boxcox([1.0, 0.0], 0.5)


def test_inv_boxcox_clamps_domain():
    out = inv_boxcox([-100.0], 0.5)
    assert np.isfinite(out).all() and out[0] >= 0


def test_guerrero_exponential_growth_prefers_log():
    y = 1.05 ** np.arange(1, 201)
    lam = guerrero_lambda(y, 1)
    oracle = grid_guerrero(y, 1)
    assert abs(oracle) <= 0.1
    assert abs(lam) <= 0.1
    assert abs(lam - oracle) < 0.01


def _homoscedastic():
    rng = np.random.default_rng(1)
    t = np.arange(1, 201)
    return 5 + 0.01 * t + rng.normal(0, 0.1, 200)


def test_guerrero_homoscedastic_matches_grid():
    y = _homoscedastic()
    lam = guerrero_lambda(y, 1)
    oracle = grid_guerrero(y, 1)
    assert abs(lam - oracle) < 0.01


@pytest.mark.xfail(
    strict=True,
    reason="two-observation blocks make the CV objective noise-dominated; "
    "the grid oracle itself lands far from 1 for this seed",
)
def test_guerrero_homoscedastic_near_identity():
    y = _homoscedastic()
    assert abs(guerrero_lambda(y, 1) - 1) <= 0.25


def test_guerrero_respects_interval():
    rng = np.random.default_rng(5)
    for y in (1.05 ** np.arange(1, 101), rng.uniform(1, 10, 80)):
        lam = guerrero_lambda(y, 1, lo=0.3, hi=0.7)
        assert 0.3 <= lam <= 0.7


def test_guerrero_too_few_blocks():
    with pytest.warns(DiagnosticWarning):
        assert guerrero_lambda([1.0, 2.0, 3.0], 2) == 1.0


# --- seasonality -----------------------------------------------------------

def test_seasonality_nonseasonal_period():
    assert seasonality_test(np.sin(np.arange(100)), 1) is False


def test_seasonality_sine_detected():
    t = np.arange(1, 241)
    y = 10 + np.sin(2 * np.pi * t / 12)
    assert acf_lag(y, 12) > 0.9
    assert seasonality_test(y, 12)


def test_seasonality_white_noise():
    y = np.random.default_rng(7).standard_normal(240)
    r = [acf_lag(y, k) for k in range(1, 13)]
    limit = 1.645 * math.sqrt((1 + 2 * sum(x * x for x in r[:11])) / 240)
    assert abs(r[11]) <= limit
    assert not seasonality_test(y, 12)


def test_seasonality_short_series():
    t = np.arange(30)
    assert not seasonality_test(10 + np.sin(2 * np.pi * t / 12), 12)


def test_seasonality_false_positive_rate():
    rng = np.random.default_rng(2024)
    hits = sum(seasonality_test(rng.standard_normal(240), 12) for _ in range(200))
    assert hits / 200 <= 0.15


# --- decomposition ---------------------------------------------------------

def test_seasonal_indices_recovered():
    s = np.array([0.8, 1.2, 0.9, 1.1])
    s = s / s.mean()
    t = np.arange(120)
    y = (50 + 0.5 * t) * s[t % 4]
    idx = seasonal_indices(y, 4)
    np.testing.assert_allclose(idx, s, atol=0.02)
    assert abs(idx.mean() - 1) < 1e-9


def test_deseasonalize_roundtrip():
    s = np.array([0.8, 1.2, 0.9, 1.1])
    t = np.arange(48)
    y = (20 + t) * s[t % 4]
    state = TransformState(seasonal_indices=seasonal_indices(y, 4), period_m=4)
    back = reseasonalize(deseasonalize(y, state), state, alignment=0)
    np.testing.assert_allclose(back, y, rtol=1e-9)


def test_nonseasonal_state_is_identity():
    y = np.arange(1.0, 10.0)
    state = TransformState()
    np.testing.assert_array_equal(deseasonalize(y, state), y)
    np.testing.assert_array_equal(reseasonalize(y, state, 3), y)


def test_seasonal_index_nonpositive_raises():
    y = np.tile([1.0, -5.0, 1.0, 1.0], 10)
    with pytest.raises(ValueError):
        seasonal_indices(y, 4)


# --- Cox-Stuart ------------------------------------------------------------

def test_cox_stuart_increasing():
    y = np.arange(1, 41, dtype=float)
    assert binomial_two_sided(20, 20) == pytest.approx(2 * 0.5**20)
    assert cox_stuart_test(y)


def test_cox_stuart_constant():
    with pytest.warns(DiagnosticWarning):
        assert cox_stuart_test(np.full(20, 3.0)) is False


def test_cox_stuart_alternating():
    y = np.tile([0.0, 1.0], 20)
    d = y[20:] - y[:20]
    pos, neg = int((d > 0).sum()), int((d < 0).sum())
    # same-parity pairs are all tied, so the oracle has nothing to reject
    assert pos + neg == 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DiagnosticWarning)
        assert cox_stuart_test(y) is False


def test_cox_stuart_matches_enumeration():
    rng = np.random.default_rng(11)
    y = np.cumsum(rng.normal(0.2, 1, 31))
    n = len(y)
    c = math.ceil(n / 2)
    d = y[c:] - y[: n - c]
    d = d[d != 0]
    p = binomial_two_sided(int((d > 0).sum()), len(d))
    assert cox_stuart_test(y) == (p < 0.05)


def test_cox_stuart_false_positive_rate():
    rng = np.random.default_rng(99)
    hits = sum(cox_stuart_test(rng.standard_normal(240)) for _ in range(200))
    assert hits / 200 <= 0.12


# --- differencing ----------------------------------------------------------

def test_difference():
    np.testing.assert_array_equal(difference([3, 5, 4]), [2, -1])


def test_integrate():
    np.testing.assert_array_equal(integrate([2, -1], 3), [5, 4])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=40))
def test_difference_integrate_roundtrip(values):
    y = np.asarray(values)
    np.testing.assert_allclose(integrate(difference(y), y[0]), y[1:], atol=1e-9)


# --- full pipeline ---------------------------------------------------------

def _seasonal_trending(n=240, m=12, seed=0):
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    s = 1 + 0.3 * np.sin(2 * np.pi * t / m)
    return (50 + 0.4 * t) * s * np.exp(rng.normal(0, 0.02, n))


def test_pipeline_records_order_and_inverts():
    y = _seasonal_trending()
    adjusted, z, state = fit_pipeline(y, 12)
    assert state.steps == ("shift", "boxcox", "deseasonalize", "difference")
    assert state.seasonal_indices is not None and state.differenced
    assert abs(state.seasonal_indices.mean() - 1) < 1e-9
    # re-anchor at the first observation and rebuild the tail
    first = state.anchored(adjusted[0])
    back = inverse_forecast(z, first, alignment=1)
    np.testing.assert_allclose(back, y[1:], rtol=1e-8)
    np.testing.assert_allclose(forward_values(y, state), adjusted, rtol=1e-12)


def test_pipeline_shifts_nonpositive_series():
    rng = np.random.default_rng(3)
    y = rng.normal(0, 1, 100)
    adjusted, z, state = fit_pipeline(y, 1)
    assert state.shift == pytest.approx(1 - y.min())
    undiff = TransformState(lam=state.lam, shift=state.shift)
    back = inverse_forecast(adjusted, undiff, alignment=0)
    np.testing.assert_allclose(back, y, rtol=1e-8, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.floats(0.01, 1e4), min_size=40, max_size=120),
    st.sampled_from([1, 4, 12]),
)
def test_pipeline_roundtrip_property(values, m):
    y = np.asarray(values)
    adjusted, z, state = fit_pipeline(y, m)
    if state.differenced:
        back = inverse_forecast(z, state.anchored(adjusted[0]), alignment=1)
        target = y[1:]
    else:
        back = inverse_forecast(z, state, alignment=0)
        target = y
    np.testing.assert_allclose(back, target, rtol=1e-8, atol=1e-8 * np.abs(y).max())


def test_pipeline_options_disable_steps():
    y = _seasonal_trending()
    opts = PreprocessOptions(boxcox=False, seasonal=False, difference=False)
    adjusted, z, state = fit_pipeline(y, 12, opts)
    assert state.lam is None and state.seasonal_indices is None and not state.differenced
    np.testing.assert_array_equal(z, y)
