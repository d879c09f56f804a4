"""Theta method in its simple-exponential-smoothing-with-drift form.

The h-step forecast is the SES level plus ``b/2 * (h - 1 + 1/alpha -
(1 - alpha)**n / alpha)`` where ``b`` is the OLS slope of the training data
against time. The classical two-line decomposition (theta lines 0 and 2)
gives the same forecasts up to the SES initialisation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import Forecaster, as_train, check_horizon
from .ets import ANN, fit_ets

MIN_TRAIN = 4


def ols_slope(y) -> float:
    y = np.asarray(y, dtype=float)
    t = np.arange(1, len(y) + 1, dtype=float)
    tc = t - t.mean()
    return float(tc @ (y - y.mean()) / (tc @ tc))


def drift_term(slope: float, alpha: float, n: int, steps) -> np.ndarray:
    steps = np.asarray(steps, dtype=float)
    return 0.5 * slope * (steps - 1.0 + 1.0 / alpha - (1.0 - alpha) ** n / alpha)


@dataclass(frozen=True)
class ThetaFit:
    level: float
    alpha: float
    slope: float
    n: int

    def forecast(self, h):
        steps = np.arange(1, check_horizon(h) + 1)
        return self.level + drift_term(self.slope, self.alpha, self.n, steps)

    def describe(self):
        return f"Theta(alpha={self.alpha:.4f}, slope={self.slope:.4g})"


def fit_theta(train) -> ThetaFit:
    y = as_train(train)
    if len(y) < MIN_TRAIN:
        raise ValueError(f"Theta needs at least {MIN_TRAIN} observations, got {len(y)}")
    ses = fit_ets(y, ANN)
    return ThetaFit(ses.level, ses.alpha, ols_slope(y), len(y))


def theta_forecast(train, period_m: int, h: int) -> np.ndarray:
    """Theta forecasts for a (seasonally adjusted) training series."""
    return fit_theta(train).forecast(h)


class ThetaForecaster(Forecaster):
    model_id = "Theta"

    def fit(self, train, period_m=1, seed=0):
        return fit_theta(train)
