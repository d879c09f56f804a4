"""Exact Gaussian process regression (posterior mean only).

Features and targets are standardised with training statistics. The noise
variance is the Table-1 style ``tolerance`` value, applied on the standardised
target scale. Length scales come from the median pairwise distance of the
training rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.spatial.distance import cdist, pdist

KERNELS = ("linear", "rbf", "polynomial", "laplace")
DEFAULT_CAP = 2000
POLY_DEGREE = 3


class FactorizationError(RuntimeError):
    pass


def kernel_matrix(kernel: str, A, B, length: float) -> np.ndarray:
    if kernel == "linear":
        return A @ B.T
    if kernel == "polynomial":
        return (A @ B.T + 1.0) ** POLY_DEGREE
    if kernel == "rbf":
        d2 = cdist(A, B, "sqeuclidean")
        return np.exp(-d2 / (2.0 * length * length))
    if kernel == "laplace":
        return np.exp(-cdist(A, B, "cityblock") / length)
    raise ValueError(f"unknown kernel {kernel!r}")


def median_length(X, kernel: str) -> float:
    if kernel not in ("rbf", "laplace") or len(X) < 2:
        return 1.0
    metric = "euclidean" if kernel == "rbf" else "cityblock"
    med = float(np.median(pdist(X, metric)))
    return med if med > 0 else 1.0


@dataclass(frozen=True)
class GpModel:
    kernel: str
    noise: float
    length: float
    x_mean: np.ndarray
    x_scale: np.ndarray
    y_mean: float
    y_scale: float
    train_x: np.ndarray
    weights: np.ndarray
    jitter: float

    def predict_many(self, X) -> np.ndarray:
        Z = (np.atleast_2d(np.asarray(X, dtype=float)) - self.x_mean) / self.x_scale
        k = kernel_matrix(self.kernel, Z, self.train_x, self.length)
        return self.y_mean + self.y_scale * (k @ self.weights)

    def predict(self, row) -> float:
        return float(self.predict_many(np.asarray(row, dtype=float)[None, :])[0])


def gp_train(features, targets, kernel: str = "rbf", tolerance: float = 0.01, seed: int = 0,
             cap: int = DEFAULT_CAP) -> GpModel:
    """Posterior-mean GP regression with ``sigma^2 = tolerance``.

    The Cholesky factorisation is retried with jitter ``1e-10 * trace / n``
    multiplied by 10 up to three times before giving up.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}")
    n = len(y)
    if n == 0 or X.shape[0] != n:
        raise ValueError("features must be (n, p) and targets (n,) with n > 0")
    if n > cap:
        raise ValueError(f"GP training size {n} exceeds cap {cap}")
    x_mean = X.mean(axis=0)
    x_scale = X.std(axis=0)
    x_scale = np.where(x_scale > 0, x_scale, 1.0)
    y_mean = float(y.mean())
    y_scale = float(y.std())
    if not y_scale > 0:
        y_scale = 1.0
    Z = (X - x_mean) / x_scale
    length = median_length(Z, kernel)
    K = kernel_matrix(kernel, Z, Z, length)
    K[np.diag_indices(n)] += tolerance
    target = (y - y_mean) / y_scale
    jitter = 0.0
    step = 1e-10 * float(np.trace(K)) / n
    for attempt in range(4):
        try:
            factor = cho_factor(K, lower=True, check_finite=False)
            if not np.all(np.isfinite(factor[0])):
                raise LinAlgError("non-finite factor")
            break
        except LinAlgError:
            if attempt == 3:
                raise FactorizationError(
                    f"{kernel} kernel matrix is not positive definite after jitter escalation"
                ) from None
            add = step * 10**attempt
            K[np.diag_indices(n)] += add - jitter
            jitter = add
    weights = cho_solve(factor, target, check_finite=False)
    return GpModel(kernel, float(tolerance), length, x_mean, x_scale, y_mean, y_scale,
                   Z, weights, jitter)
