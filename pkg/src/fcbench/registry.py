"""Model identifiers and forecaster construction."""

from __future__ import annotations

from .mlforecast import MlForecaster
from .models import (
    MACHINE_LEARNING,
    STATISTICAL,
    ArimaForecaster,
    EtsForecaster,
    Forecaster,
    NaiveForecaster,
    SeasonalNaiveForecaster,
    ThetaForecaster,
)

STATISTICAL_MODELS = ("Naive", "Naive2", "ARIMA", "ETS", "Theta")
ML_MODELS = ("GLM", "RF", "GP")
MODEL_IDS = STATISTICAL_MODELS + ML_MODELS

_STAT_CLASSES = {
    "Naive": NaiveForecaster,
    "Naive2": SeasonalNaiveForecaster,
    "ARIMA": ArimaForecaster,
    "ETS": EtsForecaster,
    "Theta": ThetaForecaster,
}


def model_type(model_id: str) -> str:
    """``"statistical"`` or ``"ml"`` for a known model id."""
    if model_id in STATISTICAL_MODELS:
        return STATISTICAL
    if model_id in ML_MODELS:
        return MACHINE_LEARNING
    raise ValueError(f"unknown model id {model_id!r}")


def make_forecaster(model_id: str, embed_p: int = 10, tune_every: int = 50) -> Forecaster:
    """A fresh forecaster instance for ``model_id``."""
    if model_id in _STAT_CLASSES:
        return _STAT_CLASSES[model_id]()
    if model_id in ML_MODELS:
        return MlForecaster(model_id, p=embed_p, tune_every=tune_every)
    raise ValueError(f"unknown model id {model_id!r}; expected one of {', '.join(MODEL_IDS)}")
