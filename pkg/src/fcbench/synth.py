"""Synthetic benchmark corpora.

Four generator families stand in for a real forecasting corpus: a linear
AR(2), a trending series with multiplicative monthly seasonality, a two-regime
threshold autoregression (nonlinear) and a random walk. All series are kept
strictly above 1 so every preprocessing step is defined.
"""

from __future__ import annotations

import numpy as np

from .series import TimeSeries

FAMILIES = ("ar2", "seasonal", "tar", "rw")
SEASONAL_PERIOD = 12
MIN_LENGTH = 100
BURN_IN = 200


def _lift(x, floor: float = 10.0) -> np.ndarray:
    """Shift a path so its minimum equals ``floor``."""
    return x - x.min() + floor


def gen_ar2(n: int, rng: np.random.Generator) -> np.ndarray:
    phi1, phi2 = 0.5 + 0.3 * rng.random(), -0.1 - 0.3 * rng.random()
    e = rng.normal(size=n + BURN_IN)
    x = np.zeros(n + BURN_IN)
    for t in range(2, n + BURN_IN):
        x[t] = phi1 * x[t - 1] + phi2 * x[t - 2] + e[t]
    return _lift(x[BURN_IN:])


def gen_seasonal(n: int, rng: np.random.Generator) -> np.ndarray:
    t = np.arange(n)
    amp = 0.15 + 0.15 * rng.random()
    phase = 2 * np.pi * rng.random()
    season = 1 + amp * np.sin(2 * np.pi * t / SEASONAL_PERIOD + phase)
    trend = 50 + (0.01 + 0.03 * rng.random()) * t
    e = rng.normal(scale=0.03, size=n + BURN_IN)
    noise = np.zeros(n + BURN_IN)
    for k in range(1, n + BURN_IN):
        noise[k] = 0.5 * noise[k - 1] + e[k]
    return trend * season * np.exp(noise[BURN_IN:])


def gen_tar(n: int, rng: np.random.Generator) -> np.ndarray:
    """Two-regime self-exciting threshold AR(1) with a sawtooth cycle.

    Below the threshold the series drifts upward as a persistent AR(1); above
    it a strongly mean-reverting regime with a large negative intercept pulls
    it back down. The noise scale also differs between the regimes.
    """
    threshold = 3.0
    lo = (0.2 + 0.2 * rng.random(), 0.95, 0.5)
    hi = (-0.5 - 0.5 * rng.random(), 0.2, 0.3)
    e = rng.normal(size=n + BURN_IN)
    x = np.zeros(n + BURN_IN)
    for t in range(1, n + BURN_IN):
        c, phi, scale = lo if x[t - 1] <= threshold else hi
        x[t] = c + phi * x[t - 1] + scale * e[t]
    return _lift(x[BURN_IN:])


def gen_rw(n: int, rng: np.random.Generator) -> np.ndarray:
    return _lift(np.cumsum(rng.normal(size=n)))


GENERATORS = {"ar2": gen_ar2, "seasonal": gen_seasonal, "tar": gen_tar, "rw": gen_rw}


def synth_corpus(n_series: int, length: int, seed: int, mix=FAMILIES) -> list[TimeSeries]:
    """Generate ``n_series`` series cycling through the families in ``mix``.

    Series ``i`` uses family ``mix[i % len(mix)]`` and its own child of
    ``SeedSequence(seed)``, so a series does not depend on how many others are
    generated.
    """
    if length < MIN_LENGTH:
        raise ValueError(f"length must be at least {MIN_LENGTH}")
    if n_series < 1:
        raise ValueError("n_series must be positive")
    mix = tuple(mix)
    unknown = [f for f in mix if f not in GENERATORS]
    if not mix or unknown:
        raise ValueError(f"unknown families {unknown}; choose from {', '.join(FAMILIES)}")
    children = np.random.SeedSequence(int(seed)).spawn(n_series)
    out = []
    for i, child in enumerate(children):
        family = mix[i % len(mix)]
        values = GENERATORS[family](length, np.random.default_rng(child))
        period = SEASONAL_PERIOD if family == "seasonal" else 1
        out.append(TimeSeries(f"{family}_{i:03d}", values, period, f"synth:{family}"))
    return out
