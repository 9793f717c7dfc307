"""Independent oracles for the trainer tests.

Everything here is written straight from the data matrices (explicit sums,
scipy minimizers, a cvxopt QP) and deliberately avoids the package's
matrix-assembly and solver code paths, so agreement between trainer and
oracle is meaningful.
"""

import numpy as np
import scipy.optimize

from flstsvm.core import ClassSplit


def make_split(rng, max_points: int = 8, max_dim: int = 3) -> ClassSplit:
    """Random small two-class split (<= max_points total samples)."""
    d = int(rng.integers(1, max_dim + 1))
    m1 = int(rng.integers(1, max_points // 2 + 1))
    m2 = int(rng.integers(1, max_points - m1 + 1))
    return ClassSplit(
        a=rng.normal(size=(m1, d)) + rng.normal(scale=2.0, size=d),
        b=rng.normal(size=(m2, d)) + rng.normal(scale=2.0, size=d),
    )


def make_memberships(rng, split: ClassSplit):
    mu_a = rng.uniform(0.1, 1.0, size=split.a.shape[0])
    mu_b = rng.uniform(0.1, 1.0, size=split.b.shape[0])
    return mu_a, mu_b


# --- weighted least-squares twin objectives (unit weights = crisp model) ---

def twin_objective(split, plane: int, p, mu=None):
    """Objective and gradient closures for one plane's training problem."""
    if plane == 1:
        own, opp, sign = split.a, split.b, 1.0
    else:
        own, opp, sign = split.b, split.a, -1.0
    weights = np.ones(opp.shape[0]) if mu is None else np.asarray(mu, dtype=float)

    def value(u):
        w, b = u[:-1], u[-1]
        prox = own @ w + b
        slack = 1.0 + sign * (opp @ w + b)
        return 0.5 * prox @ prox + 0.5 * p * np.sum(weights * slack * slack)

    def grad(u):
        w, b = u[:-1], u[-1]
        prox = own @ w + b
        slack = 1.0 + sign * (opp @ w + b)
        gw = own.T @ prox + p * sign * (opp.T @ (weights * slack))
        gb = np.sum(prox) + p * sign * np.sum(weights * slack)
        return np.concatenate([gw, [gb]])

    return value, grad


def minimize_twin(split, plane: int, p, mu=None):
    """Numeric minimizer of one plane's objective; returns (u, value)."""
    value, grad = twin_objective(split, plane, p, mu)
    n = split.n_features + 1
    res = scipy.optimize.minimize(
        value, np.zeros(n), jac=grad, method="BFGS",
        options={"gtol": 1e-12, "maxiter": 20000},
    )
    return res.x, float(res.fun)


# --- fuzzy-hyperplane objective, written directly from the data ---

def fuzzy_objective(split, plane: int, mu, p, vagueness):
    """Value closure for one fuzzy plane's training objective.

    Stacked argument z = (w, b, c, d): own-class proximal term on the
    centers, vagueness penalty M*(||c||^2 + d^2)/2, and opposite-class
    squared slack where the plane spread |x|.c + d absorbs violation,
    weighted by the opposite class's memberships.
    """
    if plane == 1:
        own, opp, sign = split.a, split.b, 1.0
    else:
        own, opp, sign = split.b, split.a, -1.0
    weights = np.asarray(mu, dtype=float)
    dim = split.n_features

    def value(z):
        w, b = z[:dim], z[dim]
        c, dd = z[dim + 1 : 2 * dim + 1], z[2 * dim + 1]
        prox = own @ w + b
        spread = np.abs(opp) @ c + dd
        slack = 1.0 + sign * (opp @ w + b) - spread
        return (
            0.5 * prox @ prox
            + 0.5 * vagueness * (c @ c + dd * dd)
            + 0.5 * p * np.sum(weights * slack * slack)
        )

    return value


def central_gradient(fun, z, step: float = 1e-6) -> np.ndarray:
    """Central finite differences with per-coordinate relative steps."""
    z = np.asarray(z, dtype=float)
    grad = np.empty_like(z)
    for i in range(z.size):
        h = step * max(1.0, abs(z[i]))
        zp, zm = z.copy(), z.copy()
        zp[i] += h
        zm[i] -= h
        grad[i] = (fun(zp) - fun(zm)) / (2.0 * h)
    return grad


# --- convex QP oracle for the soft-margin SVM ---

def svm_primal_oracle(x, y, c):
    """Exact-ish optimum of ||w||^2/2 + C sum hinge via a cvxopt QP.

    Variables (w, b, xi); returns the optimal objective value.
    """
    import cvxopt

    cvxopt.solvers.options["show_progress"] = False
    n, d = x.shape
    nv = d + 1 + n
    p_mat = np.zeros((nv, nv))
    p_mat[:d, :d] = np.eye(d)
    # Tiny diagonal keeps the KKT system nonsingular; the perturbation is
    # orders of magnitude below the comparison tolerance.
    p_mat += 1e-10 * np.eye(nv)
    q = np.concatenate([np.zeros(d + 1), np.full(n, float(c))])
    g_top = np.hstack([np.zeros((n, d + 1)), -np.eye(n)])
    g_bot = np.hstack([-(y[:, None] * x), -y[:, None], -np.eye(n)])
    g_mat = np.vstack([g_top, g_bot])
    h = np.concatenate([np.zeros(n), -np.ones(n)])
    sol = cvxopt.solvers.qp(
        cvxopt.matrix(p_mat), cvxopt.matrix(q), cvxopt.matrix(g_mat), cvxopt.matrix(h)
    )
    z = np.array(sol["x"]).ravel()
    w, b = z[:d], z[d]
    margins = 1.0 - y * (x @ w + b)
    return 0.5 * float(w @ w) + float(c) * float(np.sum(np.maximum(margins, 0.0)))
