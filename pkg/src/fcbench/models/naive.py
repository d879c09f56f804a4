"""Random-walk benchmarks: ``Naive`` and the seasonal ``Naive2``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import Forecaster, as_train, check_horizon


def naive_forecast(train, h: int) -> np.ndarray:
    """Repeat the last observation ``h`` times."""
    y = as_train(train)
    return np.full(check_horizon(h), y[-1])


def snaive_forecast(train, period_m: int, h: int) -> np.ndarray:
    """Most recent observation from the same season as each forecast step."""
    y = as_train(train)
    m = int(period_m)
    if m < 1:
        raise ValueError("period_m must be >= 1")
    if len(y) < m:
        raise ValueError(f"seasonal naive needs at least {m} observations, got {len(y)}")
    k = np.arange(1, check_horizon(h) + 1)
    # y_{n+k-m*ceil(k/m)} in 1-based indexing
    pos = len(y) + k - m * np.ceil(k / m).astype(int) - 1
    return y[pos]


@dataclass(frozen=True)
class _Repeat:
    train: np.ndarray
    period_m: int

    def forecast(self, h: int) -> np.ndarray:
        return snaive_forecast(self.train, self.period_m, h)

    def describe(self) -> str:
        return "naive" if self.period_m == 1 else f"snaive(m={self.period_m})"


class NaiveForecaster(Forecaster):
    model_id = "Naive"
    uses_pipeline = False

    def fit(self, train, period_m=1, seed=0):
        return _Repeat(as_train(train), 1)


class SeasonalNaiveForecaster(Forecaster):
    model_id = "Naive2"
    uses_pipeline = False

    def fit(self, train, period_m=1, seed=0):
        y = as_train(train)
        # windows shorter than one cycle fall back to the plain random walk
        m = period_m if len(y) >= period_m else 1
        return _Repeat(y, m)
