"""Growing-window prequential evaluation.

At every origin ``t = start, ..., n - h`` each forecaster is fit on the first
``t`` observations, forecasts ``h`` steps ahead and is scored on the next
``h`` observations on the original scale.
"""

from __future__ import annotations

import math
import time
import warnings
import zlib
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..models.base import Forecaster
from ..models.naive import naive_forecast
from ..series import TimeSeries
from ..transforms import PreprocessOptions, fit_pipeline, inverse_forecast
from .metrics import mase, smape

DEFAULT_START = 18
MODES = ("global", "strict")


@dataclass(frozen=True)
class OriginRecord:
    """Scores of one model at one prequential origin.

    ``mase`` is ``nan`` when undefined (constant training window) or when the
    forecaster failed; ``fallback`` marks origins answered by the naive
    forecast because the window was too short for the model.
    """

    series_id: str
    model_id: str
    train_size: int
    horizon: int
    mase: float
    smape: float
    smape_undefined: int
    failed: bool
    elapsed_ns: int
    fallback: bool = False

    @property
    def mase_defined(self) -> bool:
        return not self.failed and math.isfinite(self.mase)


def origin_count(n: int, h: int, start: int = DEFAULT_START) -> int:
    """Number of origins ``start..n-h`` of a growing-window run."""
    return max(0, n - h - start + 1)


def origin_seed(seed: int, series_id: str, model_id: str, origin: int) -> int:
    """Deterministic per-task seed independent of scheduling."""
    entropy = [int(seed) & (2**64 - 1), zlib.crc32(series_id.encode()),
               zlib.crc32(model_id.encode()), int(origin)]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


class _ScaleView:
    """Model-scale training windows for one series under one preprocessing mode."""

    def __init__(self, y: np.ndarray, period_m: int, mode: str, options: PreprocessOptions):
        self.y = y
        self.period_m = period_m
        self.mode = mode
        self.options = options
        if mode == "global":
            self.adjusted, self.z, self.state = fit_pipeline(y, period_m, options)

    def window(self, t: int):
        """``(z_train, state)`` for the origin whose training set is ``y[:t]``."""
        if self.mode == "strict":
            _, z, state = fit_pipeline(self.y[:t], self.period_m, self.options)
            return z, state
        state = self.state.anchored(float(self.adjusted[t - 1]))
        z = self.z[: t - 1] if state.differenced else self.z[:t]
        return z, state


def prequential_run(series: TimeSeries, forecasters: Iterable[Forecaster], h: int,
                    start: int = DEFAULT_START, mode: str = "global",
                    options: PreprocessOptions | None = None, seed: int = 0) -> list[OriginRecord]:
    """Evaluate ``forecasters`` over every growing-window origin of ``series``.

    Forecasters with ``uses_pipeline`` are fit on the preprocessed scale and
    their forecasts inverted; the others see the raw series. A forecaster that
    raises or returns non-finite values gets a failed record and the run
    continues. ``elapsed_ns`` covers fit, forecast and inversion.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    y = np.asarray(series.values, dtype=float)
    n = len(y)
    if h < 1 or start < 1:
        raise ValueError("horizon and start must be positive")
    if n < start + h:
        raise ValueError(f"series {series.id} has {n} observations; needs at least {start + h}")
    m = series.period_m
    forecasters = list(forecasters)
    view = None
    if any(f.uses_pipeline for f in forecasters):
        view = _ScaleView(y, m, mode, options or PreprocessOptions())
    records = []
    for t in range(start, n - h + 1):
        train = y[:t]
        actual = y[t: t + h]
        z = state = None
        if view is not None:
            z, state = view.window(t)
        for fc in forecasters:
            s = origin_seed(seed, series.id, fc.model_id, t)
            records.append(_evaluate_one(fc, series.id, train, actual, z, state, m, h, t, s))
    return records


def _evaluate_one(fc, series_id, train, actual, z, state, m, h, t, seed) -> OriginRecord:
    fallback = False
    began = time.perf_counter_ns()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if fc.uses_pipeline:
                if len(z) < fc.min_train:
                    # window too short for the model: naive answer on the model scale
                    raw = np.zeros(h) if state.differenced else naive_forecast(z, h)
                    fallback = True
                else:
                    raw = fc.fit(z, m, seed).forecast(h)
                forecast = inverse_forecast(raw, state, alignment=t)
            else:
                forecast = fc.fit(train, m, seed).forecast(h)
        forecast = np.asarray(forecast, dtype=float)
        ok = forecast.shape == (h,) and bool(np.all(np.isfinite(forecast)))
    except Exception:  # any model error is recorded, never fatal
        ok = False
    elapsed = time.perf_counter_ns() - began
    if not ok:
        return OriginRecord(series_id, fc.model_id, t, h, math.nan, math.nan, 0, True, elapsed)
    value, undefined = smape(actual, forecast)
    return OriginRecord(series_id, fc.model_id, t, h, mase(actual, forecast, train, m), value,
                        undefined, False, elapsed, fallback)
