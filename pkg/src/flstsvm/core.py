"""Core classifier types, the crisp least-squares twin trainer, and
distance-based twin prediction.

A twin model fits one hyperplane per class: each plane passes close to its
own class (proximal least-squares term) while the opposite class is pushed
to unit distance through squared slack. Eliminating the slack reduces each
plane to one small symmetric linear system.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ModelError
from .linalg import augment_with_ones, as_matrix, solve_spd

POSITIVE = 1
NEGATIVE = -1


def _freeze(a: np.ndarray) -> np.ndarray:
    # Always copy: locking a view would also lock the caller's array.
    a = np.array(a, dtype=float, order="C", copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TrainConfig:
    """Penalty weights for the two slack terms (one per plane)."""

    p1: float = 1.0
    p2: float = 1.0

    def __post_init__(self):
        for label, value in (("p1", self.p1), ("p2", self.p2)):
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError(f"{label} must be a positive finite number, got {value}")


@dataclass(frozen=True)
class ClassSplit:
    """Training data arranged as one matrix per class.

    ``a`` holds the positive-class samples (m1 x d), ``b`` the
    negative-class samples (m2 x d).
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.a, "positive-class matrix")
        b = as_matrix(self.b, "negative-class matrix")
        if a.shape[1] != b.shape[1]:
            raise ValueError(
                f"class matrices disagree on feature count: {a.shape[1]} vs {b.shape[1]}"
            )
        object.__setattr__(self, "a", _freeze(a))
        object.__setattr__(self, "b", _freeze(b))

    @property
    def n_features(self) -> int:
        return self.a.shape[1]


@dataclass(frozen=True)
class Hyperplane:
    """A crisp plane ``w . x + b = 0``."""

    w: np.ndarray
    b: float

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.w, dtype=float))
        if w.ndim != 1 or not np.all(np.isfinite(w)) or not np.isfinite(self.b):
            raise ValueError("hyperplane coefficients must be finite")
        object.__setattr__(self, "w", _freeze(w))
        object.__setattr__(self, "b", float(self.b))

    def decision_value(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        return x @ self.w + self.b


@dataclass(frozen=True)
class TwinModel:
    """A pair of non-parallel planes, one per class."""

    plane1: Hyperplane
    plane2: Hyperplane
    config: TrainConfig = field(default_factory=TrainConfig)
    regularized: tuple[bool, bool] = (False, False)

    def __post_init__(self):
        if self.plane1.w.shape != self.plane2.w.shape:
            raise ValueError("twin planes must share a feature dimension")

    @property
    def n_features(self) -> int:
        return self.plane1.w.shape[0]


def train_lstsvm(split: ClassSplit, cfg: TrainConfig | None = None) -> TwinModel:
    """Fit the least-squares twin model.

    Plane 1 solves ``(F'F + (1/p1) E'E) z = F'e`` with ``[w1; b1] = -z``;
    plane 2 solves ``(E'E + (1/p2) F'F) z = E'e`` with ``[w2; b2] = z``,
    where ``E = [A 1]`` and ``F = [B 1]``. Slack variables are eliminated by
    substitution and never materialized. Singular systems fall back to a
    ridge solve and are flagged in the model metadata.
    """
    cfg = cfg or TrainConfig()
    e_mat = augment_with_ones(split.a)
    f_mat = augment_with_ones(split.b)
    ete = e_mat.T @ e_mat
    ftf = f_mat.T @ f_mat
    d = split.n_features

    z1, reg1 = solve_spd(ftf + ete / cfg.p1, f_mat.T @ np.ones(f_mat.shape[0]), "plane-1")
    z2, reg2 = solve_spd(ete + ftf / cfg.p2, e_mat.T @ np.ones(e_mat.shape[0]), "plane-2")
    return TwinModel(
        plane1=Hyperplane(-z1[:d], -z1[d]),
        plane2=Hyperplane(z2[:d], z2[d]),
        config=cfg,
        regularized=(reg1, reg2),
    )


def plane_distance(plane: Hyperplane, x) -> np.ndarray | float:
    """Euclidean distance ``|w.x + b| / ||w||`` from ``x`` to the plane.

    ``x`` may be a single feature vector or a stack of rows.
    """
    norm = float(np.linalg.norm(plane.w))
    if norm == 0.0:
        raise ModelError("plane has a zero weight vector; distance is undefined")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != plane.w.shape[0]:
        raise ValueError(
            f"feature dimension mismatch: plane has {plane.w.shape[0]}, input has {x.shape[-1]}"
        )
    return np.abs(plane.decision_value(x)) / norm


def predict_twin(model, x) -> np.ndarray | int:
    """Assign ``x`` to the class whose plane is nearer.

    Exact ties go to the positive class. Accepts any model exposing
    ``plane1``/``plane2`` (crisp twin and membership-weighted models).
    Returns an int for a single vector, an int array for stacked rows.
    """
    d1 = plane_distance(model.plane1, x)
    d2 = plane_distance(model.plane2, x)
    labels = np.where(d1 <= d2, POSITIVE, NEGATIVE)
    if np.ndim(labels) == 0:
        return int(labels)
    return labels.astype(int)
