"""Regression learners used through time-delay embedding."""

from .forest import ForestModel, rf_train
from .glm import GlmModel, glm_train, lambda_max
from .gp import FactorizationError, GpModel, gp_train
from .tuning import (
    GLM_LAMBDA_RATIOS,
    GLM_MIXING,
    GP_KERNELS,
    GP_TOLERANCES,
    LEARNERS,
    RF_TREES,
    HyperConfig,
    default_config,
    default_grid,
    grid_search,
    train_learner,
    validation_mae,
)

__all__ = [
    "ForestModel", "rf_train", "GlmModel", "glm_train", "lambda_max",
    "FactorizationError", "GpModel", "gp_train", "GLM_LAMBDA_RATIOS", "GLM_MIXING",
    "GP_KERNELS", "GP_TOLERANCES", "LEARNERS", "RF_TREES", "HyperConfig",
    "default_config", "default_grid", "grid_search", "train_learner", "validation_mae",
]
