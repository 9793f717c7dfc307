"""Soft-margin linear SVM baseline.

Minimizes ``||w||^2 / 2 + C * sum_i hinge(y_i (w.x_i + b))`` through its
dual: deterministic most-violating-pair coordinate updates under the
equality constraint, followed by an exact one-dimensional search for the
bias (the primal is piecewise linear in ``b`` once ``w`` is fixed, so the
minimum sits at a hinge breakpoint).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ClassSplit, Hyperplane, POSITIVE, NEGATIVE


@dataclass(frozen=True)
class SvmConfig:
    C: float = 1.0
    max_iterations: int = 20000
    tolerance: float = 1e-6

    def __post_init__(self):
        if not np.isfinite(self.C) or self.C <= 0.0:
            raise ValueError(f"C must be a positive finite number, got {self.C}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not np.isfinite(self.tolerance) or self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class SvmModel:
    plane: Hyperplane
    config: SvmConfig = field(default_factory=SvmConfig)
    converged: bool = True
    iterations: int = 0


def hinge_objective(w, b, x, y, c) -> float:
    """Primal objective ``||w||^2/2 + C * sum hinge`` evaluated directly."""
    margins = 1.0 - y * (x @ w + b)
    return 0.5 * float(w @ w) + c * float(np.sum(np.maximum(margins, 0.0)))


def train_linear_svm(split: ClassSplit, cfg: SvmConfig | None = None) -> SvmModel:
    """Fit the soft-margin linear SVM on a two-class split.

    Stops when the maximum KKT violation falls below ``cfg.tolerance``; if
    ``cfg.max_iterations`` runs out first the best iterate is returned with
    ``converged=False``.
    """
    cfg = cfg or SvmConfig()
    x = np.vstack([split.a, split.b])
    y = np.concatenate(
        [np.full(split.a.shape[0], 1.0), np.full(split.b.shape[0], -1.0)]
    )
    n = x.shape[0]
    c = cfg.C

    gram = x @ x.T
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of the dual objective at alpha = 0
    converged = False
    iterations = 0

    for iterations in range(1, cfg.max_iterations + 1):
        vals = -y * grad
        up = ((y > 0) & (alpha < c)) | ((y < 0) & (alpha > 0))
        low = ((y < 0) & (alpha < c)) | ((y > 0) & (alpha > 0))
        up_vals = np.where(up, vals, -np.inf)
        low_vals = np.where(low, vals, np.inf)
        i = int(np.argmax(up_vals))
        j = int(np.argmin(low_vals))
        gap = up_vals[i] - low_vals[j]
        if gap < cfg.tolerance:
            converged = True
            break

        # Feasible direction alpha_i += y_i*t, alpha_j -= y_j*t keeps the
        # equality constraint; minimize the quadratic restriction exactly.
        curvature = max(gram[i, i] + gram[j, j] - 2.0 * gram[i, j], 1e-12)
        step = gap / curvature
        lo_i, hi_i = (-alpha[i], c - alpha[i]) if y[i] > 0 else (alpha[i] - c, alpha[i])
        lo_j, hi_j = (alpha[j] - c, alpha[j]) if y[j] > 0 else (-alpha[j], c - alpha[j])
        step = min(max(step, max(lo_i, lo_j)), min(hi_i, hi_j))
        if step == 0.0:
            converged = True
            break
        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        grad += step * y * (gram[:, i] - gram[:, j])

    w = x.T @ (alpha * y)
    b = _optimal_bias(w, x, y)
    return SvmModel(
        plane=Hyperplane(w, b), config=cfg, converged=converged, iterations=iterations
    )


def _optimal_bias(w: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """Exact minimizer over b of the hinge sum at fixed w.

    The hinge sum is convex piecewise linear in b, so some breakpoint
    ``b_i = y_i - w.x_i`` attains the minimum; evaluate them all.
    """
    scores = x @ w
    candidates = y - scores
    margins = 1.0 - y[None, :] * (scores[None, :] + candidates[:, None])
    totals = np.sum(np.maximum(margins, 0.0), axis=1)
    return float(candidates[int(np.argmin(totals))])


def predict_svm(plane: Hyperplane, x):
    """Sign of the decision value; points on the boundary go positive."""
    values = plane.decision_value(np.asarray(x, dtype=float))
    labels = np.where(values >= 0.0, POSITIVE, NEGATIVE)
    if np.ndim(labels) == 0:
        return int(labels)
    return labels.astype(int)
