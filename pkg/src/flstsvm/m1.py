"""Membership-weighted twin model (model M1).

Each training sample carries an importance degree in (0, 1] that scales its
squared-slack penalty; the planes themselves stay crisp. Unit memberships
reduce the trainer exactly to the crisp least-squares twin model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ClassSplit, Hyperplane, TrainConfig, _freeze
from .linalg import augment_with_ones, solve_spd

MEMBERSHIP_FLOOR = 0.05
CENTROID_EPS = 1e-6

STRATEGIES = ("uniform", "centroid", "user")


def validate_memberships(mu, count: int, name: str = "membership vector") -> np.ndarray:
    """Check that ``mu`` is a length-``count`` vector with entries in (0, 1]."""
    mu = np.asarray(mu, dtype=float)
    if mu.ndim != 1 or mu.shape[0] != count:
        raise ValueError(f"{name} must have length {count}, got shape {mu.shape}")
    if not np.all(np.isfinite(mu)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(mu <= 0.0) or np.any(mu > 1.0):
        raise ValueError(f"{name} entries must lie in (0, 1]")
    return mu.copy()


def _centroid_memberships(rows: np.ndarray) -> np.ndarray:
    center = rows.mean(axis=0)
    dist = np.linalg.norm(rows - center, axis=1)
    mu = 1.0 - dist / (dist.max() + CENTROID_EPS)
    return np.clip(mu, MEMBERSHIP_FLOOR, 1.0)


def assign_memberships(
    split: ClassSplit,
    strategy: str = "centroid",
    user_values: tuple | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Produce per-sample membership degrees for both classes.

    ``uniform`` assigns 1 everywhere. ``centroid`` down-weights samples far
    from their class centroid, ``mu = 1 - dist / (max_dist + eps)`` clamped
    to [0.05, 1], so outliers keep a small but nonzero influence. ``user``
    validates caller-provided ``(mu_a, mu_b)`` against the (0, 1] contract.
    """
    if strategy == "uniform":
        return np.ones(split.a.shape[0]), np.ones(split.b.shape[0])
    if strategy == "centroid":
        return _centroid_memberships(split.a), _centroid_memberships(split.b)
    if strategy == "user":
        if user_values is None:
            raise ValueError("strategy 'user' requires explicit membership vectors")
        mu_a, mu_b = user_values
        return (
            validate_memberships(mu_a, split.a.shape[0], "positive-class memberships"),
            validate_memberships(mu_b, split.b.shape[0], "negative-class memberships"),
        )
    raise ValueError(f"unknown membership strategy {strategy!r}; expected one of {STRATEGIES}")


@dataclass(frozen=True)
class M1Model:
    """Twin planes plus the membership vectors they were trained with."""

    plane1: Hyperplane
    plane2: Hyperplane
    config: TrainConfig
    mu_a: np.ndarray
    mu_b: np.ndarray
    strategy: str = "user"
    regularized: tuple[bool, bool] = (False, False)

    def __post_init__(self):
        object.__setattr__(self, "mu_a", _freeze(np.asarray(self.mu_a, dtype=float)))
        object.__setattr__(self, "mu_b", _freeze(np.asarray(self.mu_b, dtype=float)))

    @property
    def n_features(self) -> int:
        return self.plane1.w.shape[0]


def train_m1(
    split: ClassSplit,
    mu_a,
    mu_b,
    cfg: TrainConfig | None = None,
    strategy: str = "user",
) -> M1Model:
    """Fit the membership-weighted twin model.

    The slack in the plane-1 problem belongs to the negative-class points,
    so their memberships ``mu_b`` weight that penalty (and symmetrically
    ``mu_a`` for plane 2):

        plane 1: (F' S_b F + (1/p1) E'E) z = F' S_b 1,  [w1; b1] = -z
        plane 2: (E' S_a E + (1/p2) F'F) z = E' S_a 1,  [w2; b2] = z

    with ``S_a = diag(mu_a)``, ``S_b = diag(mu_b)``. Prediction is the same
    nearest-plane rule as the crisp model (`core.predict_twin`).
    """
    cfg = cfg or TrainConfig()
    mu_a = validate_memberships(mu_a, split.a.shape[0], "positive-class memberships")
    mu_b = validate_memberships(mu_b, split.b.shape[0], "negative-class memberships")
    e_mat = augment_with_ones(split.a)
    f_mat = augment_with_ones(split.b)
    ete = e_mat.T @ e_mat
    ftf = f_mat.T @ f_mat
    d = split.n_features

    z1, reg1 = solve_spd(
        f_mat.T @ (mu_b[:, None] * f_mat) + ete / cfg.p1, f_mat.T @ mu_b, "weighted plane-1"
    )
    z2, reg2 = solve_spd(
        e_mat.T @ (mu_a[:, None] * e_mat) + ftf / cfg.p2, e_mat.T @ mu_a, "weighted plane-2"
    )
    return M1Model(
        plane1=Hyperplane(-z1[:d], -z1[d]),
        plane2=Hyperplane(z2[:d], z2[d]),
        config=cfg,
        mu_a=mu_a,
        mu_b=mu_b,
        strategy=strategy,
        regularized=(reg1, reg2),
    )
