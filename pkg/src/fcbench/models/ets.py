"""Additive-error exponential smoothing (ANN, AAN, AAdN) with AIC selection.

Parameters are fitted by cyclic coordinate-wise golden-section search on the
in-sample one-step squared error. The trend smoothing parameter enters the
state equation directly: ``b_t = phi * b_{t-1} + beta * e_t``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .base import Forecaster, as_train, check_horizon

ANN, AAN, AADN = "ANN", "AAN", "AAdN"
KINDS = (ANN, AAN, AADN)
_KIND_CODE = {ANN: 0, AAN: 1, AADN: 2}

ALPHA_BOUNDS = (1e-4, 1.0 - 1e-4)
BETA_BOUNDS = (1e-4, 1.0 - 1e-4)
PHI_BOUNDS = (0.8 + 1e-4, 1.0 - 1e-4)
TOL = 1e-4
MAX_CYCLES = 50
MIN_TRAIN = 10


@njit(cache=True)
def _run(y, kind, alpha, beta, phi, l0, b0):
    """One pass of the smoother; returns (sse, final level, final trend)."""
    level = l0
    trend = b0 if kind > 0 else 0.0
    damp = phi if kind == 2 else 1.0
    sse = 0.0
    for t in range(1, y.shape[0]):
        fc = level + damp * trend
        e = y[t] - fc
        sse += e * e
        level = fc + alpha * e
        if kind > 0:
            trend = damp * trend + beta * e
    return sse, level, trend


@njit(cache=True)
def _golden(y, kind, params, which, lo, hi, l0, b0, tol):
    g = (np.sqrt(5.0) - 1.0) / 2.0
    a = lo
    b = hi
    c = b - g * (b - a)
    d = a + g * (b - a)
    params[which] = c
    fc = _run(y, kind, params[0], params[1], params[2], l0, b0)[0]
    params[which] = d
    fd = _run(y, kind, params[0], params[1], params[2], l0, b0)[0]
    while b - a > tol:
        if fc <= fd:
            b = d
            d = c
            fd = fc
            c = b - g * (b - a)
            params[which] = c
            fc = _run(y, kind, params[0], params[1], params[2], l0, b0)[0]
        else:
            a = c
            c = d
            fc = fd
            d = a + g * (b - a)
            params[which] = d
            fd = _run(y, kind, params[0], params[1], params[2], l0, b0)[0]
    params[which] = 0.5 * (a + b)


@njit(cache=True)
def _coordinate_search(y, kind, start, lows, highs, free, l0, b0, tol, max_cycles):
    params = start.copy()
    for _ in range(max_cycles):
        before = params.copy()
        for i in range(3):
            if free[i]:
                _golden(y, kind, params, i, lows[i], highs[i], l0, b0, tol)
        if np.max(np.abs(params - before)) < tol:
            break
    return params


@dataclass(frozen=True)
class EtsSpec:
    """Fitted exponential smoothing model.

    ``beta`` is ``None`` without a trend; ``phi_damp`` is ``None`` unless damped.
    ``level`` and ``trend`` are the final states after the training pass.
    """

    error_trend: str
    alpha: float
    beta: float | None
    phi_damp: float | None
    level: float
    trend: float
    aic: float
    sse: float
    n: int

    def describe(self) -> str:
        parts = [f"alpha={self.alpha:.4f}"]
        if self.beta is not None:
            parts.append(f"beta={self.beta:.4f}")
        if self.phi_damp is not None:
            parts.append(f"phi={self.phi_damp:.4f}")
        return f"ETS({self.error_trend}; {', '.join(parts)})"


def initial_states(y) -> tuple[float, float]:
    """Level = first observation, trend = mean of the first four differences."""
    y = np.asarray(y, dtype=float)
    d = np.diff(y[:5])
    return float(y[0]), float(d.mean()) if len(d) else 0.0


def n_parameters(kind: str) -> int:
    """Free smoothing parameters plus initial states."""
    return {ANN: 2, AAN: 4, AADN: 5}[kind]


def fit_ets(train, kind: str = ANN, alpha=None, beta=None, phi_damp=None) -> EtsSpec:
    """Fit one ETS form; any of ``alpha``/``beta``/``phi_damp`` may be fixed."""
    y = as_train(train)
    if kind not in _KIND_CODE:
        raise ValueError(f"unknown ETS form {kind!r}")
    code = _KIND_CODE[kind]
    l0, b0 = initial_states(y)
    start = np.array([
        0.5 if alpha is None else alpha,
        0.1 if beta is None else beta,
        0.98 if phi_damp is None else phi_damp,
    ])
    free = np.array([alpha is None, code > 0 and beta is None, code == 2 and phi_damp is None])
    if code < 2:
        start[2] = 1.0
    lows = np.array([ALPHA_BOUNDS[0], BETA_BOUNDS[0], PHI_BOUNDS[0]])
    highs = np.array([ALPHA_BOUNDS[1], BETA_BOUNDS[1], PHI_BOUNDS[1]])
    params = start
    if free.any():
        params = _coordinate_search(y, code, start, lows, highs, free, l0, b0, TOL, MAX_CYCLES)
    sse, level, trend = _run(y, code, params[0], params[1], params[2], l0, b0)
    n = len(y) - 1
    aic = n * np.log(max(sse / max(n, 1), 1e-300)) + 2 * n_parameters(kind)
    return EtsSpec(
        kind,
        float(params[0]),
        float(params[1]) if code > 0 else None,
        float(params[2]) if code == 2 else None,
        float(level),
        float(trend) if code > 0 else 0.0,
        float(aic),
        float(sse),
        n,
    )


def fit_ets_auto(train) -> EtsSpec:
    """Fit ANN, AAN and AAdN and keep the lowest AIC (first form wins ties)."""
    y = as_train(train)
    if len(y) < MIN_TRAIN:
        raise ValueError(f"ETS needs at least {MIN_TRAIN} observations, got {len(y)}")
    fits = [fit_ets(y, kind) for kind in KINDS]
    return min(fits, key=lambda s: s.aic)


def ets_forecast(spec: EtsSpec, h: int) -> np.ndarray:
    h = check_horizon(h)
    steps = np.arange(1, h + 1)
    if spec.error_trend == ANN:
        return np.full(h, spec.level)
    if spec.error_trend == AAN:
        return spec.level + steps * spec.trend
    damp = np.cumsum(spec.phi_damp ** steps)
    return spec.level + damp * spec.trend


@dataclass(frozen=True)
class _FittedEts:
    spec: EtsSpec

    def forecast(self, h):
        return ets_forecast(self.spec, h)

    def describe(self):
        return self.spec.describe()


class EtsForecaster(Forecaster):
    model_id = "ETS"

    def fit(self, train, period_m=1, seed=0):
        y = as_train(train)
        if len(y) < MIN_TRAIN:
            spec = fit_ets(y, ANN)
        else:
            spec = fit_ets_auto(y)
        return _FittedEts(spec)
