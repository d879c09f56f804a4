"""Reduced automatic ARIMA.

The differencing order comes from repeated Cox-Stuart trend tests. Every
``(p, q)`` cell of the grid is then fitted by conditional sum of squares (CSS)
with a BFGS quasi-Newton search started from zero, using central finite
differences for the gradient, and the cell with the lowest AIC wins. All cells
condition on the same leading ``max_p`` observations so their CSS values cover
identical time indices.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ..transforms import DiagnosticWarning, cox_stuart_test
from .base import Forecaster, as_train, check_horizon

MIN_TRAIN = 20
MAX_ITER = 500
STEP_TOL = 1e-6


@njit(cache=True)
def _residuals(w, phi, theta, c, cond):
    n = w.shape[0]
    e = np.zeros(n)
    p = phi.shape[0]
    q = theta.shape[0]
    for t in range(cond, n):
        pred = c
        for i in range(p):
            pred += phi[i] * w[t - 1 - i]
        for j in range(q):
            s = t - 1 - j
            if s >= cond:
                pred += theta[j] * e[s]
        e[t] = w[t] - pred
    return e


@njit(cache=True)
def _css(x, w, p, q, has_c, cond):
    n = w.shape[0]
    c = x[p + q] if has_c else 0.0
    e = np.zeros(n)
    total = 0.0
    for t in range(cond, n):
        pred = c
        for i in range(p):
            pred += x[i] * w[t - 1 - i]
        for j in range(q):
            s = t - 1 - j
            if s >= cond:
                pred += x[p + j] * e[s]
        r = w[t] - pred
        e[t] = r
        total += r * r
        if total > 1e300:
            return np.inf
    return total


@njit(cache=True)
def _grad(x, w, p, q, has_c, cond):
    k = x.shape[0]
    g = np.zeros(k)
    xp = x.copy()
    for i in range(k):
        h = 1e-6 * max(1.0, abs(x[i]))
        xp[i] = x[i] + h
        fp = _css(xp, w, p, q, has_c, cond)
        xp[i] = x[i] - h
        fm = _css(xp, w, p, q, has_c, cond)
        xp[i] = x[i]
        g[i] = (fp - fm) / (2.0 * h)
    return g


@njit(cache=True)
def _bfgs(w, p, q, has_c, cond, max_iter, step_tol):
    """Minimise CSS from zero; returns (x, css, iterations, converged)."""
    k = p + q + (1 if has_c else 0)
    x = np.zeros(k)
    f = _css(x, w, p, q, has_c, cond)
    if k == 0:
        return x, f, 0, True
    g = _grad(x, w, p, q, has_c, cond)
    H = np.eye(k)
    scaled = False
    for it in range(1, max_iter + 1):
        d = -H @ g
        slope = g @ d
        if not slope < 0.0:
            H = np.eye(k)
            d = -g
            slope = g @ d
            if slope == 0.0:
                return x, f, it, True
        a = 1.0
        xn = x + a * d
        fn = _css(xn, w, p, q, has_c, cond)
        while not (np.isfinite(fn) and fn <= f + 1e-4 * a * slope):
            a *= 0.5
            if a < 1e-16:
                # no representable descent left: numerically stationary
                return x, f, it, True
            xn = x + a * d
            fn = _css(xn, w, p, q, has_c, cond)
        s = xn - x
        gn = _grad(xn, w, p, q, has_c, cond)
        yv = gn - g
        sy = s @ yv
        x = xn
        f = fn
        g = gn
        if np.max(np.abs(s)) < step_tol:
            return x, f, it, True
        if sy > 1e-12 * np.sqrt((s @ s) * (yv @ yv)):
            if not scaled:
                H = np.eye(k) * (sy / (yv @ yv))
                scaled = True
            rho = 1.0 / sy
            Hy = H @ yv
            H = H + ((sy + yv @ Hy) * rho * rho) * np.outer(s, s) - rho * (
                np.outer(Hy, s) + np.outer(s, Hy)
            )
    return x, f, max_iter, False


@dataclass(frozen=True)
class ArimaSpec:
    """A fitted ARIMA(p, d, q) on the original (undifferenced) scale.

    ``c`` is the constant of the differenced equation (zero when ``d > 0``);
    ``n_cond`` is the number of leading differenced observations the CSS
    conditions on.
    """

    p: int
    d: int
    q: int
    phi: np.ndarray
    theta: np.ndarray
    c: float
    sigma2: float
    aic: float
    n_cond: int = 0
    converged: bool = True
    iterations: int = 0
    diagnostics: tuple = field(default=(), compare=False)

    @property
    def has_constant(self) -> bool:
        return self.d == 0

    def describe(self) -> str:
        return f"ARIMA({self.p},{self.d},{self.q})"


def ar_is_stationary(phi, tol: float = 1e-6) -> bool:
    """True when every root of ``1 - phi_1 z - ... - phi_p z^p`` lies outside the unit circle."""
    phi = np.asarray(phi, dtype=float)
    if len(phi) == 0 or np.all(phi == 0):
        return True
    coeffs = np.r_[-phi[::-1], 1.0]
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs = coeffs[1:]
    roots = np.roots(coeffs)
    return bool(np.all(np.abs(roots) > 1.0 + tol))


def ma_is_invertible(theta, tol: float = 1e-6) -> bool:
    """True when every root of ``1 + theta_1 z + ... + theta_q z^q`` lies outside the unit circle."""
    return ar_is_stationary(-np.asarray(theta, dtype=float), tol)


def css(params, w, p: int, q: int, has_constant: bool, n_cond: int) -> float:
    """Conditional sum of squares of an ARMA(p, q) on an already differenced series."""
    return float(
        _css(np.asarray(params, float), np.asarray(w, float), p, q, has_constant, n_cond)
    )


def choose_d(train, max_d: int = 2, alpha: float = 0.05) -> int:
    """Difference while Cox-Stuart detects a trend, up to ``max_d`` times."""
    w = np.asarray(train, dtype=float)
    d = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DiagnosticWarning)
        while d < max_d and len(w) >= 6 and cox_stuart_test(w, alpha):
            w = np.diff(w)
            d += 1
    return d


def _fit_cell(w, p, q, d, n_cond):
    has_c = d == 0
    n_eff = len(w) - n_cond
    # constant/scale are handled outside the optimiser for conditioning
    if has_c:
        loc = float(w.mean())
    else:
        loc = 0.0
    scale = float(np.std(w))
    if not np.isfinite(scale) or scale < 1e-12:
        scale = 1.0
    ws = (w - loc) / scale
    x, f, iters, ok = _bfgs(ws, p, q, has_c, n_cond, MAX_ITER, STEP_TOL)
    phi = x[:p].copy()
    theta = x[p : p + q].copy()
    c = 0.0
    if has_c:
        c = scale * x[p + q] + loc * (1.0 - phi.sum())
    css_orig = f * scale * scale
    k = p + q + 1 + int(has_c)
    aic = n_eff * np.log(max(css_orig / n_eff, 1e-300)) + 2 * k
    return ArimaSpec(
        p, d, q, phi, theta, float(c), float(css_orig / n_eff), float(aic),
        n_cond, bool(ok), int(iters),
    )


def fit_arima(train, p: int, d: int, q: int, n_cond: int | None = None) -> ArimaSpec:
    """CSS fit of a fixed-order ARIMA(p, d, q); constant included iff ``d == 0``."""
    y = as_train(train)
    w = np.diff(y, n=d) if d else y
    cond = p if n_cond is None else n_cond
    if len(w) - cond < 1:
        raise ValueError("not enough observations for the requested order")
    return _fit_cell(w, p, q, d, cond)


def fit_arima_auto(train, period_m: int = 1, max_p: int = 5, max_q: int = 5) -> ArimaSpec:
    """Automatic ARIMA order selection by AIC over an exhaustive ``(p, q)`` grid.

    Cells that fail to converge within 500 iterations, have a non-stationary AR
    part or non-invertible MA part, or leave fewer than three residuals per
    parameter are skipped and listed in ``diagnostics``. If every cell is skipped the result is the
    ``(0, d, 0)`` fit.
    """
    y = as_train(train)
    if len(y) < MIN_TRAIN:
        raise ValueError(f"automatic ARIMA needs at least {MIN_TRAIN} observations, got {len(y)}")
    d = choose_d(y)
    w = np.diff(y, n=d) if d else y
    cond = min(max_p, max(len(w) - 2, 0))
    n_eff = len(w) - cond
    best = None
    skipped = []
    for p in range(max_p + 1):
        if p > cond:
            skipped.append(f"({p},{d},*): too few observations")
            continue
        for q in range(max_q + 1):
            k = p + q + 1 + int(d == 0)
            if n_eff < 3 * k:
                skipped.append(f"({p},{d},{q}): too few observations")
                continue
            spec = _fit_cell(w, p, q, d, cond)
            if not spec.converged:
                skipped.append(f"({p},{d},{q}): no convergence")
                continue
            if not ar_is_stationary(spec.phi):
                skipped.append(f"({p},{d},{q}): non-stationary AR part")
                continue
            if not ma_is_invertible(spec.theta):
                skipped.append(f"({p},{d},{q}): non-invertible MA part")
                continue
            if not np.isfinite(spec.aic):
                skipped.append(f"({p},{d},{q}): non-finite AIC")
                continue
            if best is None or spec.aic < best.aic:
                best = spec
    if best is None:
        best = _fit_cell(w, 0, 0, d, cond)
        skipped.append("all cells skipped: fell back to (0,d,0)")
    return ArimaSpec(**{**best.__dict__, "diagnostics": tuple(skipped)})


def arima_forecast(spec: ArimaSpec, train, h: int) -> np.ndarray:
    """Recursive ARMA forecasts on the differenced scale, integrated back.

    Future innovations are zero; past ones are the CSS residuals of ``train``.
    """
    y = as_train(train)
    h = check_horizon(h)
    levels = [y]
    for _ in range(spec.d):
        levels.append(np.diff(levels[-1]))
    w = levels[-1]
    e = _residuals(w, spec.phi, spec.theta, spec.c, min(spec.n_cond, len(w)))
    hist_w = list(w)
    hist_e = list(e)
    out = np.empty(h)
    for k in range(h):
        pred = spec.c
        for i in range(spec.p):
            pred += spec.phi[i] * hist_w[-1 - i]
        for j in range(spec.q):
            pred += spec.theta[j] * hist_e[-1 - j]
        out[k] = pred
        hist_w.append(pred)
        hist_e.append(0.0)
    for lvl in reversed(levels[:-1]):
        out = lvl[-1] + np.cumsum(out)
    return out


@dataclass(frozen=True)
class _FittedArima:
    spec: ArimaSpec
    train: np.ndarray

    def forecast(self, h):
        return arima_forecast(self.spec, self.train, h)

    def describe(self):
        return self.spec.describe()


class ArimaForecaster(Forecaster):
    model_id = "ARIMA"

    def __init__(self, max_p: int = 5, max_q: int = 5):
        self.max_p = max_p
        self.max_q = max_q

    def fit(self, train, period_m=1, seed=0):
        y = as_train(train)
        if len(y) < MIN_TRAIN:
            # too short for order search: random walk / mean on the chosen d
            spec = fit_arima(y, 0, choose_d(y), 0)
        else:
            spec = fit_arima_auto(y, period_m, self.max_p, self.max_q)
        return _FittedArima(spec, y)
