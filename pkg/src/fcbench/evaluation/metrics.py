"""Scale-free forecast accuracy measures."""

from __future__ import annotations

import math

import numpy as np

SMAPE_EPS = 1e-12


def mase_scale(train, period_m: int = 1) -> float:
    """In-sample mean absolute error of the seasonal naive method on ``train``.

    Windows no longer than one season fall back to lag 1.
    """
    y = np.asarray(train, dtype=float)
    m = int(period_m) if len(y) > period_m else 1
    if len(y) <= m:
        raise ValueError("MASE scaling needs more than one training observation")
    return float(np.mean(np.abs(y[m:] - y[:-m])))


def mase(actual, forecast, train, period_m: int = 1) -> float:
    """Mean absolute scaled error; ``nan`` flags an undefined (zero) scale."""
    a = np.asarray(actual, dtype=float)
    f = np.asarray(forecast, dtype=float)
    if a.shape != f.shape or a.size == 0:
        raise ValueError("actual and forecast must be non-empty and of equal length")
    q = mase_scale(train, period_m)
    if not q > 0:
        return math.nan
    return float(np.mean(np.abs(a - f)) / q)


def smape(actual, forecast) -> tuple[float, int]:
    """Symmetric MAPE on the 0-2 scale and the number of undefined terms.

    Terms whose denominator ``|a| + |f|`` is below ``1e-12`` are skipped and
    counted; if every term is undefined the value is ``nan``.
    """
    a = np.asarray(actual, dtype=float)
    f = np.asarray(forecast, dtype=float)
    if a.shape != f.shape or a.size == 0:
        raise ValueError("actual and forecast must be non-empty and of equal length")
    denom = np.abs(a) + np.abs(f)
    ok = denom >= SMAPE_EPS
    undefined = int(np.count_nonzero(~ok))
    if not ok.any():
        return math.nan, undefined
    return float(np.mean(2.0 * np.abs(a[ok] - f[ok]) / denom[ok])), undefined
