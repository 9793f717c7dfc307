"""Fuzzy-hyperplane twin model (model M2).

Every plane parameter is a symmetric triangular fuzzy number: weights
``(w_i, c_i)`` and bias ``(b, d)`` carry a center and a nonnegative width.
Training trades three quadratic terms per plane:

  * a proximal least-squares term pulling the plane's center through its
    own class,
  * a vagueness penalty ``M * (||c||^2 / 2 + d^2 / 2)`` shrinking the
    spreads (``M`` is the user's vagueness control; large ``M`` recovers
    the crisp membership-weighted model),
  * a membership-weighted squared-slack term for the opposite class, where
    the plane's spread evaluated at a point, ``|x| . c + d``, absorbs part
    of that point's margin violation.

Zeroing the gradient in the stacked unknowns ``(w, b, c, d)`` yields one
symmetric linear system per plane. Because the system is unconstrained,
solved spreads can come out negative; they are clipped to zero afterwards
and the model records whether that projection changed anything.

Classification uses the fuzzy point-to-plane distance ``(delta, gamma)``
and a four-case membership function of the two distances; the class with
the larger membership wins, ties going to the positive class.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ClassSplit, POSITIVE, NEGATIVE, _freeze
from .errors import ModelError
from .linalg import augment_with_ones, solve_spd
from .m1 import validate_memberships


@dataclass(frozen=True)
class TriangularFuzzyNumber:
    """Symmetric triangular fuzzy number with center ``o`` and width ``r``."""

    center: float
    width: float

    def __post_init__(self):
        if not (np.isfinite(self.center) and np.isfinite(self.width)):
            raise ValueError("fuzzy number components must be finite")
        if self.width < 0.0:
            raise ValueError(f"fuzzy number width must be nonnegative, got {self.width}")

    def membership(self, t: float) -> float:
        """Degree to which ``t`` belongs to the number (peak 1 at the center)."""
        if self.width == 0.0:
            return 1.0 if t == self.center else 0.0
        return max(0.0, 1.0 - abs(t - self.center) / self.width)


@dataclass(frozen=True)
class FuzzyHyperplane:
    """Plane whose weights and bias are triangular fuzzy numbers.

    ``w``/``b`` are the centers, ``c``/``d`` the nonnegative widths.
    """

    w: np.ndarray
    c: np.ndarray
    b: float
    d: float

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.w, dtype=float))
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        if w.shape != c.shape:
            raise ValueError("weight centers and widths must have matching shapes")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(c))):
            raise ValueError("fuzzy plane coefficients must be finite")
        if not (np.isfinite(self.b) and np.isfinite(self.d)):
            raise ValueError("fuzzy plane bias must be finite")
        if np.any(c < 0.0) or self.d < 0.0:
            raise ValueError("fuzzy plane widths must be nonnegative")
        object.__setattr__(self, "w", _freeze(w))
        object.__setattr__(self, "c", _freeze(c))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "d", float(self.d))

    def weight(self, i: int) -> TriangularFuzzyNumber:
        return TriangularFuzzyNumber(float(self.w[i]), float(self.c[i]))

    @property
    def bias(self) -> TriangularFuzzyNumber:
        return TriangularFuzzyNumber(self.b, self.d)

    @property
    def vagueness(self) -> float:
        """Total spread ``||c||^2 / 2 + d`` of the plane."""
        return 0.5 * float(self.c @ self.c) + self.d


@dataclass(frozen=True)
class M2Config:
    """Penalties for the two slack terms plus the vagueness control weight."""

    p1: float = 1.0
    p2: float = 1.0
    vagueness: float = 1.0

    def __post_init__(self):
        for label, value in (("p1", self.p1), ("p2", self.p2), ("vagueness", self.vagueness)):
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError(f"{label} must be a positive finite number, got {value}")


@dataclass(frozen=True)
class FuzzyDistance:
    """Fuzzy point-to-plane distance: center part ``delta``, spread part ``gamma``."""

    delta: float
    gamma: float

    def __post_init__(self):
        if self.delta < 0.0 or self.gamma < 0.0:
            raise ValueError("fuzzy distance components must be nonnegative")


@dataclass(frozen=True)
class M2Model:
    """A pair of fuzzy hyperplanes plus training diagnostics.

    ``raw1``/``raw2`` keep the unprojected stacked solutions
    ``(w, b, c, d)`` of the two linear systems; ``projected`` records
    whether clipping the spreads to zero changed either plane.
    """

    h1: FuzzyHyperplane
    h2: FuzzyHyperplane
    config: M2Config = field(default_factory=M2Config)
    regularized: tuple[bool, bool] = (False, False)
    projected: tuple[bool, bool] = (False, False)
    raw1: np.ndarray | None = None
    raw2: np.ndarray | None = None

    def __post_init__(self):
        if self.h1.w.shape != self.h2.w.shape:
            raise ValueError("fuzzy planes must share a feature dimension")

    @property
    def n_features(self) -> int:
        return self.h1.w.shape[0]


def _plane_system(own, opp, mu_opp, penalty, vagueness, sign):
    """Stationarity system of one plane's objective.

    ``sign`` is +1 for the positive-class plane (slack 1 + f(x) - spread on
    the negative class) and -1 for the negative-class plane (slack
    1 - f(x) - spread on the positive class).
    """
    own_aug = augment_with_ones(own)
    opp_aug = augment_with_ones(opp)
    spread_aug = augment_with_ones(np.abs(opp))
    k = own_aug.shape[1]

    weighted_opp = mu_opp[:, None] * opp_aug
    weighted_spread = mu_opp[:, None] * spread_aug
    sys_uu = own_aug.T @ own_aug + penalty * (opp_aug.T @ weighted_opp)
    sys_uv = -sign * penalty * (opp_aug.T @ weighted_spread)
    sys_vv = vagueness * np.eye(k) + penalty * (spread_aug.T @ weighted_spread)
    rhs_u = -sign * penalty * (opp_aug.T @ mu_opp)
    rhs_v = penalty * (spread_aug.T @ mu_opp)

    system = np.block([[sys_uu, sys_uv], [sys_uv.T, sys_vv]])
    rhs = np.concatenate([rhs_u, rhs_v])
    # Symmetrize away accumulation round-off before the SPD solve.
    system = 0.5 * (system + system.T)
    return system, rhs


def train_m2(
    split: ClassSplit,
    mu_a,
    mu_b,
    cfg: M2Config | None = None,
) -> M2Model:
    """Fit the fuzzy-hyperplane twin model.

    Solves the two stationarity systems described in the module docstring,
    then projects the spreads onto nonnegativity. Memberships follow the
    same convention as the weighted crisp model: the opposite class's
    degrees weight a plane's slack. Singular systems are ridge-solved and
    flagged.
    """
    cfg = cfg or M2Config()
    mu_a = validate_memberships(mu_a, split.a.shape[0], "positive-class memberships")
    mu_b = validate_memberships(mu_b, split.b.shape[0], "negative-class memberships")
    d = split.n_features

    planes = []
    regularized = []
    projected = []
    raws = []
    for own, opp, mu_opp, penalty, sign, name in (
        (split.a, split.b, mu_b, cfg.p1, 1.0, "fuzzy plane-1"),
        (split.b, split.a, mu_a, cfg.p2, -1.0, "fuzzy plane-2"),
    ):
        system, rhs = _plane_system(own, opp, mu_opp, penalty, cfg.vagueness, sign)
        z, reg = solve_spd(system, rhs, name)
        w, b = z[:d], z[d]
        c, dd = z[d + 1 : 2 * d + 1], z[2 * d + 1]
        clipped_c = np.maximum(c, 0.0)
        clipped_d = max(dd, 0.0)
        planes.append(FuzzyHyperplane(w=w, c=clipped_c, b=float(b), d=float(clipped_d)))
        regularized.append(reg)
        projected.append(bool(np.any(c < 0.0) or dd < 0.0))
        raws.append(_freeze(z))

    return M2Model(
        h1=planes[0],
        h2=planes[1],
        config=cfg,
        regularized=(regularized[0], regularized[1]),
        projected=(projected[0], projected[1]),
        raw1=raws[0],
        raw2=raws[1],
    )


def fuzzy_distance(plane: FuzzyHyperplane, x) -> FuzzyDistance:
    """Fuzzy distance from a point to a fuzzy plane.

    ``delta = |w.x + b| / ||w||`` measures the center offset and
    ``gamma = |(w + c).x| / ||w||`` the spread offset; both are normalized
    by the Euclidean norm of the center vector. The spread part
    deliberately involves neither bias component.
    """
    delta, gamma = _distance_arrays(plane, np.asarray(x, dtype=float))
    return FuzzyDistance(float(delta), float(gamma))


def _distance_arrays(plane: FuzzyHyperplane, x: np.ndarray):
    norm = float(np.linalg.norm(plane.w))
    if norm == 0.0:
        raise ModelError("fuzzy plane has a zero center vector; distance is undefined")
    if x.shape[-1] != plane.w.shape[0]:
        raise ValueError(
            f"feature dimension mismatch: plane has {plane.w.shape[0]}, input has {x.shape[-1]}"
        )
    delta = np.abs(x @ plane.w + plane.b) / norm
    gamma = np.abs(x @ (plane.w + plane.c)) / norm
    return delta, gamma


def _margin_mass(delta, gamma):
    # The four-case rule charges a plane delta+gamma when its center part
    # dominates (delta >= gamma) and delta alone otherwise.
    return np.where(delta >= gamma, delta + gamma, delta)


def hyperplane_membership(d1: FuzzyDistance, d2: FuzzyDistance) -> tuple[float, float]:
    """Membership degrees of a point in each of two fuzzy planes.

    Implements the four-case rule selected by the comparisons
    ``delta >= gamma`` per plane; the second degree is the same rule with
    the planes swapped, so the two always sum to 1. A vanishing case
    denominator means total ignorance and returns (0.5, 0.5).
    """
    for dist in (d1, d2):
        if dist.delta < 0.0 or dist.gamma < 0.0:
            raise ValueError("fuzzy distances must be nonnegative")
    mu1, mu2 = _membership_arrays(
        np.asarray(d1.delta), np.asarray(d1.gamma), np.asarray(d2.delta), np.asarray(d2.gamma)
    )
    return float(mu1), float(mu2)


def _membership_arrays(delta1, gamma1, delta2, gamma2):
    mass1 = _margin_mass(delta1, gamma1)
    mass2 = _margin_mass(delta2, gamma2)
    total = mass1 + mass2
    safe = np.where(total > 0.0, total, 1.0)
    mu1 = np.where(total > 0.0, 1.0 - mass1 / safe, 0.5)
    mu2 = np.where(total > 0.0, 1.0 - mass2 / safe, 0.5)
    return mu1, mu2


def predict_m2(model: M2Model, x):
    """Classify by fuzzy-plane membership, returning ``(label, mu1, mu2)``.

    The class whose plane holds the larger membership wins; an exact tie
    goes to the positive class. For a stack of rows all three results are
    arrays.
    """
    x = np.asarray(x, dtype=float)
    delta1, gamma1 = _distance_arrays(model.h1, x)
    delta2, gamma2 = _distance_arrays(model.h2, x)
    mu1, mu2 = _membership_arrays(delta1, gamma1, delta2, gamma2)
    labels = np.where(mu1 >= mu2, POSITIVE, NEGATIVE)
    if np.ndim(labels) == 0:
        return int(labels), float(mu1), float(mu2)
    return labels.astype(int), mu1, mu2
