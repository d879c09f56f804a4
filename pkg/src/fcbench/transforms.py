"""Preprocessing transforms and the tests that switch them on.

The pipeline runs shift -> Box-Cox -> seasonal adjustment -> first difference
and is inverted in exactly the reverse order. Every fitted parameter lives in
:class:`TransformState` so forecasts can be mapped back to the original scale.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

PIPELINE_STEPS = ("shift", "boxcox", "deseasonalize", "difference")


class DiagnosticWarning(UserWarning):
    """A degenerate input forced a fallback result."""


# ---------------------------------------------------------------------------
# Box-Cox
# ---------------------------------------------------------------------------

def boxcox(values, lam: float) -> np.ndarray:
    """Box-Cox transform; ``log`` when ``|lam| < 1e-9``."""
    y = np.asarray(values, dtype=float)
    if np.any(y <= 0):
        raise ValueError(
            "Box-Cox needs strictly positive input; apply the shift recorded in "
            "TransformState before transforming"
        )
    if abs(lam) < 1e-9:
        return np.log(y)
    return (np.power(y, lam) - 1.0) / lam


def inv_boxcox(values, lam: float) -> np.ndarray:
    x = np.asarray(values, dtype=float)
    if abs(lam) < 1e-9:
        return np.exp(x)
    base = np.maximum(lam * x + 1.0, 1e-12)
    return np.power(base, 1.0 / lam)


def _guerrero_cv(lam: float, blocks: np.ndarray) -> float:
    mu = blocks.mean(axis=1)
    sd = blocks.std(axis=1, ddof=1)
    rat = sd / np.power(mu, 1.0 - lam)
    m = rat.mean()
    if m == 0 or not np.isfinite(m):
        return np.inf
    return rat.std(ddof=1) / m


def golden_section(f, lo: float, hi: float, tol: float = 1e-4, max_iter: int = 200):
    """Minimise a scalar function on ``[lo, hi]``; returns ``(x, f(x))``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    # endpoints are never probed by the bracket itself
    for cand in (lo, hi):
        fv = f(cand)
        if fv < fx:
            x, fx = cand, fv
    return x, fx


def guerrero_lambda(values, period_m: int = 1, lo: float = -1.0, hi: float = 2.0) -> float:
    """Box-Cox parameter minimising the Guerrero coefficient of variation.

    The series is cut into consecutive blocks of ``max(period_m, 2)``
    observations (incomplete leading observations are dropped) and the
    coefficient of variation of ``sd_g / mean_g ** (1 - lambda)`` across blocks
    is minimised by golden-section search on ``[lo, hi]``.

    Returns 1 with a :class:`DiagnosticWarning` when fewer than two complete
    blocks are available.
    """
    y = np.asarray(getattr(values, "values", values), dtype=float)
    if not lo < hi:
        raise ValueError("need lo < hi")
    if np.any(y <= 0):
        raise ValueError("Guerrero selection needs strictly positive data (apply the shift first)")
    block = max(int(period_m), 2)
    nblocks = len(y) // block
    if nblocks < 2:
        warnings.warn("fewer than 2 complete blocks; Box-Cox lambda set to 1", DiagnosticWarning)
        return 1.0
    blocks = y[len(y) - nblocks * block:].reshape(nblocks, block)
    lam, _ = golden_section(lambda lam: _guerrero_cv(lam, blocks), lo, hi, tol=1e-4)
    return float(lam)


# ---------------------------------------------------------------------------
# Seasonality
# ---------------------------------------------------------------------------

def acf(values, nlags: int) -> np.ndarray:
    """Sample autocorrelations at lags ``0..nlags`` (biased estimator)."""
    y = np.asarray(values, dtype=float)
    d = y - y.mean()
    denom = float(d @ d)
    out = np.zeros(nlags + 1)
    if denom == 0:
        out[0] = 1.0
        return out
    for k in range(nlags + 1):
        out[k] = float(d[: len(d) - k] @ d[k:]) / denom
    return out


def seasonality_test(values, period_m: int = 1, z: float = 1.645) -> bool:
    """Lag-m autocorrelation significance test for seasonality.

    True when ``|r_m| > z * sqrt((1 + 2 * sum_{i<m} r_i**2) / n)``. Returns
    False for ``period_m == 1`` or fewer than ``3 * period_m`` observations.
    """
    y = np.asarray(getattr(values, "values", values), dtype=float)
    m = int(getattr(values, "period_m", period_m))
    n = len(y)
    if m <= 1 or n < 3 * m:
        return False
    r = acf(y, m)
    limit = z * math.sqrt((1.0 + 2.0 * float(np.sum(r[1:m] ** 2))) / n)
    return bool(abs(r[m]) > limit)


def seasonal_indices(values, period_m: int) -> np.ndarray:
    """Classical multiplicative decomposition indices, normalised to mean 1.

    Index ``k`` belongs to every position ``t`` with ``t % period_m == k``.
    """
    y = np.asarray(values, dtype=float)
    m = int(period_m)
    n = len(y)
    if m % 2 == 0:
        w = np.r_[0.5, np.ones(m - 1), 0.5] / m
    else:
        w = np.ones(m) / m
    half = len(w) // 2
    trend = np.convolve(y, w, mode="valid")
    pos = np.arange(half, n - half)
    ratios = y[pos] / trend
    idx = np.array([ratios[pos % m == k].mean() for k in range(m)])
    idx = idx / idx.mean()
    if np.any(~np.isfinite(idx)) or np.any(idx <= 0):
        raise ValueError("non-positive seasonal index: data are not multiplicative-seasonal")
    return idx


# ---------------------------------------------------------------------------
# Trend
# ---------------------------------------------------------------------------

def cox_stuart_pvalue(values) -> tuple[float, int, int]:
    """Two-sided Cox-Stuart p-value with the positive-sign and pair counts.

    Ties are dropped. With no untied pair the p-value is 1.
    """
    y = np.asarray(values, dtype=float)
    n = len(y)
    c = math.ceil(n / 2)
    d = y[c:] - y[: n - c]
    d = d[d != 0]
    k = len(d)
    if k == 0:
        return 1.0, 0, 0
    s = int(np.sum(d > 0))
    return float(stats.binomtest(s, k, 0.5).pvalue), s, k


def cox_stuart_test(values, alpha: float = 0.05) -> bool:
    """True when the Cox-Stuart sign test detects a monotone trend."""
    y = np.asarray(values, dtype=float)
    if len(y) < 6:
        raise ValueError("Cox-Stuart test needs at least 6 observations")
    p, _, k = cox_stuart_pvalue(y)
    if k == 0:
        warnings.warn("Cox-Stuart: every pair is tied; no trend reported", DiagnosticWarning)
        return False
    return p < alpha


def difference(values) -> np.ndarray:
    y = np.asarray(values, dtype=float)
    if len(y) < 2:
        raise ValueError("difference needs at least 2 observations")
    return np.diff(y)


def integrate(diffs, last_train_value: float) -> np.ndarray:
    return last_train_value + np.cumsum(np.asarray(diffs, dtype=float))


# ---------------------------------------------------------------------------
# Pipeline state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransformState:
    """Fitted preprocessing parameters.

    ``lam`` and ``seasonal_indices`` are ``None`` when the step is skipped.
    ``last_train_value`` anchors the integration of differenced forecasts and is
    expressed on the seasonally adjusted Box-Cox scale.
    """

    lam: float | None = None
    seasonal_indices: np.ndarray | None = None
    differenced: bool = False
    last_train_value: float = 0.0
    shift: float = 0.0
    period_m: int = 1
    steps: tuple = PIPELINE_STEPS
    notes: tuple = ()

    def anchored(self, last_train_value: float) -> "TransformState":
        return replace(self, last_train_value=float(last_train_value))


def deseasonalize(values, state: TransformState, alignment: int = 0) -> np.ndarray:
    """Divide by the seasonal index of each position; identity when nonseasonal.

    ``alignment`` is the absolute position of ``values[0]``.
    """
    y = np.asarray(values, dtype=float)
    idx = state.seasonal_indices
    if idx is None:
        return y.copy()
    pos = (alignment + np.arange(len(y))) % len(idx)
    return y / idx[pos]


def reseasonalize(forecasts, state: TransformState, alignment: int) -> np.ndarray:
    """Multiply forecasts by the index of the season each step lands on.

    ``alignment`` is the absolute position of the first forecast.
    """
    f = np.asarray(forecasts, dtype=float)
    idx = state.seasonal_indices
    if idx is None:
        return f.copy()
    pos = (alignment + np.arange(len(f))) % len(idx)
    return f * idx[pos]


@dataclass(frozen=True)
class PreprocessOptions:
    boxcox: bool = True
    seasonal: bool = True
    difference: bool = True
    lambda_lo: float = -1.0
    lambda_hi: float = 2.0
    alpha: float = 0.05


def fit_pipeline(values, period_m: int = 1, options: PreprocessOptions | None = None):
    """Fit the preprocessing pipeline on ``values``.

    Returns ``(adjusted, z, state)``: ``adjusted`` is the Box-Cox and seasonally
    adjusted series (same length as the input), ``z`` is what models are fit on
    (``diff(adjusted)`` when differencing is on), and ``state`` is anchored at
    the last adjusted value so :func:`inverse_forecast` continues the series.
    """
    opts = options or PreprocessOptions()
    y = np.asarray(values, dtype=float)
    notes = []
    shift = 0.0
    lam = None
    x = y
    if opts.boxcox:
        if np.min(y) <= 0:
            shift = 1.0 - float(np.min(y))
        x = y + shift
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DiagnosticWarning)
            lam = guerrero_lambda(x, period_m, opts.lambda_lo, opts.lambda_hi)
        x = boxcox(x, lam)
    state = TransformState(lam=lam, shift=shift, period_m=int(period_m))
    if opts.seasonal and period_m > 1 and seasonality_test(x, period_m):
        if np.all(x > 0):
            try:
                idx = seasonal_indices(x, period_m)
                state = replace(state, seasonal_indices=idx)
            except ValueError:
                notes.append("seasonal adjustment skipped: non-positive index")
        else:
            notes.append("seasonal adjustment skipped: non-positive transformed values")
    adjusted = deseasonalize(x, state)
    differenced = False
    if opts.difference and len(adjusted) >= 6:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DiagnosticWarning)
            differenced = cox_stuart_test(adjusted, opts.alpha)
    z = difference(adjusted) if differenced else adjusted
    state = replace(
        state,
        differenced=differenced,
        last_train_value=float(adjusted[-1]),
        notes=tuple(notes),
    )
    return adjusted, z, state


def forward_values(values, state: TransformState, alignment: int = 0) -> np.ndarray:
    """Apply a fitted state's shift, Box-Cox and seasonal steps (no differencing)."""
    x = np.asarray(values, dtype=float) + state.shift
    if state.lam is not None:
        x = boxcox(x, state.lam)
    return deseasonalize(x, state, alignment)


def inverse_forecast(forecasts, state: TransformState, alignment: int) -> np.ndarray:
    """Map model-scale forecasts back to the original scale.

    Reverse order: integrate -> reseasonalise -> inverse Box-Cox -> unshift.
    ``alignment`` is the absolute position of the first forecast.
    """
    f = np.asarray(forecasts, dtype=float)
    if state.differenced:
        f = integrate(f, state.last_train_value)
    f = reseasonalize(f, state, alignment)
    if state.lam is not None:
        f = inv_boxcox(f, state.lam)
    return f - state.shift
