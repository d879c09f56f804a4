"""Hyper-parameter configurations, the declared search grids and grid search."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forest import rf_train
from .glm import glm_train, lambda_max
from .gp import KERNELS, gp_train

LEARNERS = ("GLM", "RF", "GP")

GLM_MIXING = (0.0, 0.25, 0.5, 0.75, 1.0)
# penalty path as a fraction of lambda_max, 20 log-spaced values down to 1e-4
GLM_LAMBDA_RATIOS = tuple(float(v) for v in np.logspace(0.0, -4.0, 20))
RF_TREES = (50, 100, 250, 500)
GP_KERNELS = KERNELS
GP_TOLERANCES = (0.001, 0.01)


@dataclass(frozen=True)
class HyperConfig:
    """A learner id plus its parameter values as sorted ``(name, value)`` pairs.

    GLM cells carry either ``lambda_ratio`` (a fraction of the data-dependent
    ``lambda_max``) or an absolute ``lambda_reg``.
    """

    learner_id: str
    params: tuple

    @classmethod
    def of(cls, learner_id: str, **params) -> "HyperConfig":
        return cls(learner_id, tuple(sorted(params.items())))

    def __getitem__(self, key):
        return dict(self.params)[key]

    def get(self, key, default=None):
        return dict(self.params).get(key, default)

    def label(self) -> str:
        inner = ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                          for k, v in self.params)
        return f"{self.learner_id}({inner})"


def default_grid(learner_id: str) -> list[HyperConfig]:
    if learner_id == "GLM":
        return [HyperConfig.of("GLM", alpha_mix=a, lambda_ratio=r)
                for a in GLM_MIXING for r in GLM_LAMBDA_RATIOS]
    if learner_id == "RF":
        return [HyperConfig.of("RF", n_trees=t) for t in RF_TREES]
    if learner_id == "GP":
        return [HyperConfig.of("GP", kernel=k, tolerance=tol)
                for k in GP_KERNELS for tol in GP_TOLERANCES]
    raise ValueError(f"unknown learner {learner_id!r}")


def default_config(learner_id: str) -> HyperConfig:
    """Fixed configuration used when the window is too small to tune."""
    if learner_id == "GLM":
        return HyperConfig.of("GLM", alpha_mix=0.5, lambda_ratio=GLM_LAMBDA_RATIOS[10])
    if learner_id == "RF":
        return HyperConfig.of("RF", n_trees=100)
    if learner_id == "GP":
        return HyperConfig.of("GP", kernel="rbf", tolerance=0.01)
    raise ValueError(f"unknown learner {learner_id!r}")


def train_learner(config: HyperConfig, features, targets, seed: int = 0):
    """Train the learner named by ``config``; returns a model with ``predict``."""
    lid = config.learner_id
    if lid == "GLM":
        lam = config.get("lambda_reg")
        if lam is None:
            lam = config["lambda_ratio"] * lambda_max(features, targets)
        return glm_train(features, targets, lam, config["alpha_mix"])
    if lid == "RF":
        return rf_train(features, targets, int(config["n_trees"]), seed)
    if lid == "GP":
        return gp_train(features, targets, config["kernel"], config["tolerance"], seed)
    raise ValueError(f"unknown learner {lid!r}")


def validation_mae(model, features, targets) -> float:
    pred = model.predict_many(features)
    err = np.abs(np.asarray(targets, dtype=float) - pred)
    return float(err.mean()) if np.all(np.isfinite(err)) else np.inf


def grid_search(learner_id, grid, train_features, train_targets, val_features, val_targets,
                seed: int = 0):
    """Pick the grid cell with the lowest validation MAE.

    Returns ``(best_config, scores)`` where ``scores`` lists the MAE of every
    cell in grid order. Ties go to the earliest cell. A cell whose training
    fails scores ``inf``.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("empty hyper-parameter grid")
    if len(val_targets) == 0:
        raise ValueError("validation set is empty")
    scores = []
    for cell in grid:
        if cell.learner_id != learner_id:
            raise ValueError(f"grid cell {cell.label()} does not belong to {learner_id}")
        try:
            model = train_learner(cell, train_features, train_targets, seed)
            scores.append(validation_mae(model, val_features, val_targets))
        except (ValueError, RuntimeError, np.linalg.LinAlgError):
            scores.append(np.inf)
    best = int(np.argmin(scores))
    return grid[best], scores
