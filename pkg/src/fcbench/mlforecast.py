"""Regression learners as forecasters via time-delay embedding.

A series is embedded with order ``p``; a learner is trained to map the lag
vector (most recent value first) to the next value, and multi-step forecasts
are produced recursively by feeding predictions back into the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .learners import LEARNERS, HyperConfig, default_config, default_grid, grid_search, train_learner
from .models.base import MACHINE_LEARNING, Forecaster, as_train, check_horizon
from .series import embed

MIN_VALIDATION_ROWS = 18


@dataclass(frozen=True)
class MlForecastConfig:
    """Embedding and tuning policy for one learner.

    ``tune_every`` counts calls to :meth:`MlForecaster.fit` (prequential
    origins) between grid searches; ``val_fraction`` of the embedded rows,
    taken from the end, form the validation partition, which must hold at
    least ``min_val_rows`` rows for tuning to run.
    """

    learner_id: str
    p: int = 10
    tune_every: int = 50
    val_fraction: float = 0.2
    min_val_rows: int = MIN_VALIDATION_ROWS

    def __post_init__(self):
        if self.learner_id not in LEARNERS:
            raise ValueError(f"unknown learner {self.learner_id!r}")
        if self.p < 1 or self.tune_every < 1:
            raise ValueError("p and tune_every must be positive")
        if not 0 < self.val_fraction < 1:
            raise ValueError("val_fraction must lie in (0, 1)")


def validation_split(n_rows: int, val_fraction: float) -> tuple[int, int]:
    """Chronological ``(n_train, n_val)`` split of ``n_rows`` embedded rows."""
    # the epsilon keeps e.g. 0.2 * 990 from rounding down to 197
    n_val = int(math.floor(val_fraction * n_rows + 1e-9))
    return n_rows - n_val, n_val


def can_tune(n_rows: int, config: MlForecastConfig) -> bool:
    n_train, n_val = validation_split(n_rows, config.val_fraction)
    return n_val >= config.min_val_rows and n_train >= 1


@dataclass(frozen=True)
class MlFit:
    """A trained learner plus the window needed to forecast from the end of its data."""

    model: object
    hyper: HyperConfig
    last_values: np.ndarray  # most recent first, length p
    n_rows: int
    tuned: bool
    notes: tuple = field(default=(), compare=False)

    def forecast(self, h: int) -> np.ndarray:
        return ml_forecast_recursive(self.model, self.last_values, h)

    def describe(self) -> str:
        return f"{self.hyper.label()} p={len(self.last_values)}"


def ml_fit(train, config: MlForecastConfig, cached_hyper: HyperConfig | None = None,
           seed: int = 0) -> MlFit:
    """Embed ``train`` and train the configured learner.

    With ``cached_hyper`` the cached configuration is refit directly. Without
    it a grid search runs on a chronological train/validation split and the
    winner is refit on every embedded row; if the validation floor is unmet the
    learner's default configuration is used and the fit is flagged untuned.

    Raises
    ------
    ValueError
        If ``train`` is not longer than the embedding order.
    """
    y = as_train(train)
    data = embed(y, config.p)
    X, t = data.features, data.targets
    n_rows = len(t)
    notes = []
    tuned = False
    if cached_hyper is not None:
        hyper = cached_hyper
        tuned = True
    elif can_tune(n_rows, config):
        n_train, _ = validation_split(n_rows, config.val_fraction)
        hyper, _ = grid_search(config.learner_id, default_grid(config.learner_id),
                               X[:n_train], t[:n_train], X[n_train:], t[n_train:], seed)
        tuned = True
        notes.append(f"tuned on {n_train}/{n_rows - n_train} rows")
    else:
        hyper = default_config(config.learner_id)
        notes.append(f"tuning skipped: {n_rows} rows below validation floor")
    model = train_learner(hyper, X, t, seed)
    last = y[::-1][: config.p].copy()
    return MlFit(model, hyper, last, n_rows, tuned, tuple(notes))


def ml_forecast_recursive(model, last_p_values, h: int) -> np.ndarray:
    """Iterate a one-step model ``h`` times.

    ``last_p_values`` is ordered most recent first; each prediction is pushed
    into the most recent slot and the oldest value drops out.
    """
    h = check_horizon(h)
    window = np.array(last_p_values, dtype=float)
    out = np.empty(h)
    for k in range(h):
        out[k] = model.predict(window)
        window[1:] = window[:-1]
        window[0] = out[k]
    return out


class MlForecaster(Forecaster):
    """Forecaster wrapper that caches tuned hyper-parameters across origins.

    The cache is refreshed by a new grid search once ``tune_every`` fits have
    used it; while the window is too short to tune, every fit retries tuning.
    """

    family = MACHINE_LEARNING

    def __init__(self, learner_id: str, p: int = 10, tune_every: int = 50,
                 val_fraction: float = 0.2):
        self.config = MlForecastConfig(learner_id, p, tune_every, val_fraction)
        self.model_id = learner_id
        self.min_train = p + 1
        self.reset()

    def reset(self):
        self._cached: HyperConfig | None = None
        self._uses = 0
        self.tuning_events = 0

    def fit(self, train, period_m: int = 1, seed: int = 0) -> MlFit:
        cached = self._cached if self._uses < self.config.tune_every else None
        fitted = ml_fit(train, self.config, cached, seed)
        if cached is None and fitted.tuned:
            self._cached = fitted.hyper
            self._uses = 0
            self.tuning_events += 1
        if self._cached is not None:
            self._uses += 1
        return fitted
