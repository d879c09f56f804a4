"""Statistical forecasters."""

from .arima import ArimaForecaster, ArimaSpec, arima_forecast, fit_arima, fit_arima_auto
from .base import MACHINE_LEARNING, STATISTICAL, FittedModel, Forecaster
from .ets import EtsForecaster, EtsSpec, ets_forecast, fit_ets, fit_ets_auto
from .naive import NaiveForecaster, SeasonalNaiveForecaster, naive_forecast, snaive_forecast
from .theta import ThetaForecaster, fit_theta, theta_forecast

__all__ = [
    "ArimaForecaster", "ArimaSpec", "arima_forecast", "fit_arima", "fit_arima_auto",
    "MACHINE_LEARNING", "STATISTICAL", "FittedModel", "Forecaster",
    "EtsForecaster", "EtsSpec", "ets_forecast", "fit_ets", "fit_ets_auto",
    "NaiveForecaster", "SeasonalNaiveForecaster", "naive_forecast", "snaive_forecast",
    "ThetaForecaster", "fit_theta", "theta_forecast",
]
