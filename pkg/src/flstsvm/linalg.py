"""Dense symmetric solves and matrix helpers used by every trainer.

All systems in this package are small (at most a few dozen unknowns) Gram
systems, so a Cholesky factorization with a relative ridge fallback covers
every case; explicit inverses are never formed.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import ModelError

# Relative tolerance for accepting a matrix as symmetric.
SYMMETRY_RTOL = 1e-9
# Relative residual a solve must reach before the ridge fallback kicks in.
RESIDUAL_RTOL = 1e-8
# Ridge magnitude is RIDGE_RTOL * trace(M) / dim.
RIDGE_RTOL = 1e-8


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a finite 2-d float array."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Validate and return ``v`` as a finite 1-d float array."""
    x = np.asarray(v, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite entries")
    return x


def augment_with_ones(a) -> np.ndarray:
    """Append a trailing column of ones to ``a`` (one per row)."""
    m = as_matrix(a, "augment_with_ones argument")
    return np.hstack([m, np.ones((m.shape[0], 1))])


def solve_spd(m, v, name: str = "system") -> tuple[np.ndarray, bool]:
    """Solve ``m @ x = v`` for a symmetric (nominally SPD) matrix.

    Returns ``(x, regularized)``. The solve is attempted with a Cholesky
    factorization plus one step of iterative refinement; if the matrix is
    not positive definite, or the refined residual still exceeds
    ``RESIDUAL_RTOL * max(1, ||v||)``, the ridge system
    ``(m + lam*I) x = v`` with ``lam = RIDGE_RTOL * trace(m) / dim`` is
    solved instead and ``regularized`` is True.

    Deterministic: identical inputs produce bit-identical outputs.
    """
    mat = as_matrix(m, name)
    rhs = as_vector(v, f"{name} right-hand side")
    n = mat.shape[0]
    if mat.shape[1] != n:
        raise ValueError(f"{name} matrix must be square, got shape {mat.shape}")
    if rhs.shape[0] != n:
        raise ValueError(
            f"{name} dimension mismatch: matrix is {n}x{n}, rhs has length {rhs.shape[0]}"
        )
    asym = np.max(np.abs(mat - mat.T))
    if asym > SYMMETRY_RTOL * max(1.0, np.max(np.abs(mat))):
        raise ValueError(f"{name} matrix is not symmetric (max asymmetry {asym:.3e})")

    bound = RESIDUAL_RTOL * max(1.0, float(np.linalg.norm(rhs)))
    factor = _cholesky(mat)
    if factor is not None:
        x = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
        # One refinement pass rescues mildly ill-conditioned Gram systems.
        if float(np.linalg.norm(mat @ x - rhs)) > bound:
            x = x + scipy.linalg.cho_solve(factor, rhs - mat @ x, check_finite=False)
        if float(np.linalg.norm(mat @ x - rhs)) <= bound:
            return x, False

    lam = RIDGE_RTOL * float(np.trace(mat)) / n
    if lam <= 0.0:
        raise ModelError(f"{name} is singular and has non-positive trace; cannot regularize")
    factor = _cholesky(mat + lam * np.eye(n))
    if factor is None:
        raise ModelError(f"{name} remains indefinite after ridge regularization")
    return scipy.linalg.cho_solve(factor, rhs, check_finite=False), True


def _cholesky(mat: np.ndarray):
    """Return a Cholesky factor of ``mat``, or None if it is not SPD."""
    try:
        return scipy.linalg.cho_factor(mat, lower=True, check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        return None
