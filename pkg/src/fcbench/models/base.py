"""Uniform fit/forecast contract shared by every forecaster."""

from __future__ import annotations

from typing import Protocol

import numpy as np

STATISTICAL = "statistical"
MACHINE_LEARNING = "ml"


class FittedModel(Protocol):
    def forecast(self, h: int) -> np.ndarray: ...

    def describe(self) -> str: ...


class Forecaster:
    """Base class for forecasters.

    Subclasses set ``model_id``, ``family``, ``uses_pipeline`` and
    ``min_train`` (shortest window :meth:`fit` accepts) and implement
    :meth:`fit`. A forecaster instance may keep state across calls to ``fit``
    (the ML wrappers cache tuned hyper-parameters), so the evaluation engine
    creates one instance per (series, model) task.
    """

    model_id = ""
    family = STATISTICAL
    uses_pipeline = True
    min_train = 1

    def fit(self, train, period_m: int = 1, seed: int = 0) -> FittedModel:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.model_id})"


def as_train(train) -> np.ndarray:
    y = np.asarray(train, dtype=float)
    if y.ndim != 1:
        raise ValueError("training data must be one-dimensional")
    if len(y) == 0:
        raise ValueError("training data is empty")
    return y


def check_horizon(h: int) -> int:
    if int(h) < 1:
        raise ValueError("forecast horizon must be a positive integer")
    return int(h)
