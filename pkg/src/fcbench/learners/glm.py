"""Gaussian elastic-net regression fitted by cyclic coordinate descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

TOL = 1e-7
MAX_SWEEPS = 10_000


@njit(cache=True)
def _objective(r, beta, lam, alpha):
    n = r.shape[0]
    l1 = 0.0
    l2 = 0.0
    for j in range(beta.shape[0]):
        l1 += abs(beta[j])
        l2 += beta[j] * beta[j]
    return (r @ r) / (2.0 * n) + lam * (alpha * l1 + 0.5 * (1.0 - alpha) * l2)


@njit(cache=True)
def _coordinate_descent(Xs, yc, active, lam, alpha, tol, max_sweeps, debug):
    n, p = Xs.shape
    beta = np.zeros(p)
    r = yc.copy()
    thresh = lam * alpha
    denom = 1.0 + lam * (1.0 - alpha)
    trace = np.empty(max_sweeps + 1 if debug else 1)
    if debug:
        trace[0] = _objective(r, beta, lam, alpha)
    sweeps = 0
    for sweep in range(max_sweeps):
        max_change = 0.0
        for j in range(p):
            if not active[j]:
                continue
            old = beta[j]
            rho = 0.0
            for i in range(n):
                rho += Xs[i, j] * r[i]
            rho = rho / n + old
            if rho > thresh:
                new = (rho - thresh) / denom
            elif rho < -thresh:
                new = (rho + thresh) / denom
            else:
                new = 0.0
            delta = new - old
            if delta != 0.0:
                for i in range(n):
                    r[i] -= Xs[i, j] * delta
                beta[j] = new
                if abs(delta) > max_change:
                    max_change = abs(delta)
        sweeps = sweep + 1
        if debug:
            trace[sweeps] = _objective(r, beta, lam, alpha)
        if max_change < tol:
            break
    return beta, sweeps, trace[: sweeps + 1] if debug else trace[:0]


@dataclass(frozen=True)
class GlmModel:
    intercept: float
    coef: np.ndarray
    lambda_reg: float
    alpha_mix: float
    sweeps: int
    objective_trace: np.ndarray | None = None

    def predict(self, row) -> float:
        return float(self.intercept + np.asarray(row, dtype=float) @ self.coef)

    def predict_many(self, X) -> np.ndarray:
        return self.intercept + np.asarray(X, dtype=float) @ self.coef


def standardize(X):
    """Column means and (population) standard deviations; constant columns get sd 0."""
    X = np.asarray(X, dtype=float)
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    return mu, sd


def lambda_max(X, y) -> float:
    """Smallest penalty that zeroes every coefficient of the lasso (alpha_mix = 1)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    mu, sd = standardize(X)
    safe = np.where(sd > 0, sd, 1.0)
    Xs = (X - mu) / safe
    Xs[:, sd == 0] = 0.0
    return float(np.max(np.abs(Xs.T @ (y - y.mean()))) / len(y)) if X.shape[1] else 0.0


def glm_train(features, targets, lambda_reg: float, alpha_mix: float, debug: bool = False) -> GlmModel:
    """Elastic-net fit on internally standardised features.

    Minimises ``(1/2n) * ||y - b0 - X b||^2 + lambda_reg * (alpha_mix * ||b||_1 +
    (1 - alpha_mix) / 2 * ||b||_2^2)`` in standardised coordinates and maps the
    coefficients back to the original feature scale. With ``debug`` the
    objective after every sweep is kept in ``objective_trace``.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError("features must be (n, p) and targets (n,)")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("GLM inputs must be finite")
    if lambda_reg < 0 or not 0 <= alpha_mix <= 1:
        raise ValueError("need lambda_reg >= 0 and alpha_mix in [0, 1]")
    mu, sd = standardize(X)
    active = sd > 0
    safe = np.where(active, sd, 1.0)
    Xs = np.ascontiguousarray((X - mu) / safe)
    Xs[:, ~active] = 0.0
    ybar = y.mean()
    beta, sweeps, trace = _coordinate_descent(
        Xs, y - ybar, active, float(lambda_reg), float(alpha_mix), TOL, MAX_SWEEPS, debug
    )
    if debug:
        assert np.all(np.diff(trace) <= 1e-12 * max(1.0, abs(trace[0]))), "objective increased"
    coef = np.where(active, beta / safe, 0.0)
    intercept = float(ybar - mu @ coef)
    return GlmModel(intercept, coef, float(lambda_reg), float(alpha_mix), int(sweeps),
                    trace if debug else None)
