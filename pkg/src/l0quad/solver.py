"""Proximal gradient descent for Theta(x) = x'Ax + theta(x) + h(x).

The smooth part is the quadratic; theta + h are handled jointly by an
exact prox in closed form (hard thresholding, sparse projections, a
best-prefix rule on the sphere) except for the simplex + zero-norm
pairing where the prox enumerates supports (guarded to p <= 20).  With
a step below 1/(2||A||_2) the iteration descends monotonically and its
fixed points are critical.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .linalg import spectral_norm
from .sets import (
    DegenerateInput,
    project_simplex,
    project_sparse_simplex,
    project_sparse_sphere,
    project_sparsity,
)
from .subdiff import SparsityBall, Theta, ZeroNorm, objective, support


class SolverConfigError(ValueError):
    pass


class RateEstimationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """step=None means automatic: 1 / (2||A||_2 + 1e-8)."""

    max_iters: int = 500
    step: object = None
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise SolverConfigError("max_iters must be >= 1")
        if self.step is not None and not self.step > 0:
            raise SolverConfigError("step must be positive or None")
        if self.tol < 0:
            raise SolverConfigError("tol must be nonnegative")


@dataclass
class IterateTrace:
    xs: list
    thetas: np.ndarray
    supports: list
    step_norms: np.ndarray
    support_stable_from: int

    def __len__(self):
        return len(self.thetas)


def hard_threshold(u, t, nu):
    """Prox of t*nu*||.||_0: keep entries with |u_i| > sqrt(2 nu t),
    drop everything else (ties at the threshold drop)."""
    if not (t > 0 and nu > 0):
        raise ValueError("t and nu must be positive")
    u = np.asarray(u, dtype=float)
    tau = np.sqrt(2.0 * nu * t)
    return np.where(np.abs(u) > tau, u, 0.0)


def _sphere_prefix(u, weight):
    # minimize 0.5||x-u||^2 + weight*||x||_0 over the unit sphere:
    # for each k the best size-k support is the top-k prefix, scored by
    # -||u_prefix|| + weight*k; smallest k wins ties
    u = np.asarray(u, dtype=float)
    order = np.lexsort((np.arange(u.size), -np.abs(u)))
    pref = np.sqrt(np.cumsum(u[order] ** 2))
    if pref[-1] == 0.0:
        raise DegenerateInput("prox onto the sphere is multivalued at 0")
    scores = -pref + weight * np.arange(1, u.size + 1)
    k = int(np.argmin(scores)) + 1
    out = np.zeros_like(u)
    idx = order[:k]
    out[idx] = u[idx] / pref[k - 1]
    return out


def _simplex_zero_norm(u, weight):
    # exhaustive support enumeration; exact but exponential
    u = np.asarray(u, dtype=float)
    p = u.size
    if p > 20:
        raise ValueError("simplex + zero-norm prox enumeration is guarded to p <= 20")
    best_val, best_x = np.inf, None
    for size in range(1, p + 1):
        for J in combinations(range(p), size):
            xj = project_simplex(u[list(J)])
            x = np.zeros(p)
            x[list(J)] = xj
            val = 0.5 * np.sum((x - u) ** 2) + weight * np.count_nonzero(x != 0.0)
            if val < best_val:
                best_val, best_x = val, x
    return best_x


def prox_theta_h(theta, h, u, t):
    """Exact minimizer of 0.5||x-u||^2 + t*(theta + h)(x).

    Deterministic tie-breaks throughout (threshold ties drop, top-k
    ties keep smaller indices, prefix-score ties keep the sparser
    point).  Degenerate inputs (where the minimizer is a set) raise
    DegenerateInput.
    """
    u = np.asarray(u, dtype=float)
    if not t > 0:
        raise ValueError("t must be positive")
    zn = isinstance(h, ZeroNorm)
    if isinstance(h, SparsityBall) and h.kappa > u.size:
        raise ValueError("kappa exceeds the dimension")

    if theta is Theta.ZERO:
        return hard_threshold(u, t, h.nu) if zn else project_sparsity(u, h.kappa)
    if theta is Theta.NONNEG:
        v = np.maximum(u, 0.0)
        return hard_threshold(v, t, h.nu) if zn else project_sparsity(v, h.kappa)
    if theta is Theta.SPHERE:
        return _sphere_prefix(u, t * h.nu) if zn else project_sparse_sphere(u, h.kappa)
    if theta is Theta.SPHERE_NONNEG:
        v = np.maximum(u, 0.0)
        if not np.any(v > 0.0):
            raise DegenerateInput("prox onto sphere/orthant is multivalued: no positive entry")
        return _sphere_prefix(v, t * h.nu) if zn else project_sparse_sphere(v, h.kappa)
    if theta is Theta.SIMPLEX:
        return _simplex_zero_norm(u, t * h.nu) if zn else project_sparse_simplex(u, h.kappa)
    raise ValueError("unknown theta kind")


def random_feasible(problem, seed):
    """Feasible starting point: prox of a standard normal draw."""
    rng = np.random.default_rng(seed)
    for _ in range(100):
        u = rng.standard_normal(problem.dim)
        try:
            return prox_theta_h(problem.theta, problem.h, u, 1.0)
        except DegenerateInput:
            continue
    raise RuntimeError("could not draw a feasible starting point")


def proximal_gradient(problem, x0, config=SolverConfig()):
    """Run x+ = prox_{t(theta+h)}(x - 2tAx) from a feasible x0.

    Stops when the step norm drops to config.tol or max_iters is hit.
    Returns the full trace; step_norms[k] is the distance from iterate
    k-1 to iterate k (0 at k=0).  support_stable_from is the first
    index from which the support never changes again.
    """
    x0 = np.asarray(x0, dtype=float)
    if not np.isfinite(objective(problem, x0)):
        raise ValueError("x0 is not in the domain of the objective")
    anorm = spectral_norm(problem.a)
    if config.step is None:
        step = 1.0 / (2.0 * anorm + 1e-8)
    else:
        step = float(config.step)
        if step * 2.0 * anorm >= 1.0:
            raise SolverConfigError(
                "step %g too large for ||A||_2 = %g (need step*2||A|| < 1)" % (step, anorm)
            )

    a = problem.a.entries
    xs = [x0.copy()]
    thetas = [objective(problem, x0)]
    supports = [tuple(support(x0).indices)]
    step_norms = [0.0]
    x = x0.copy()
    for _ in range(config.max_iters):
        u = x - step * (2.0 * (a @ x))
        xn = prox_theta_h(problem.theta, problem.h, u, step)
        sn = float(np.linalg.norm(xn - x))
        xs.append(xn)
        thetas.append(objective(problem, xn))
        supports.append(tuple(support(xn).indices))
        step_norms.append(sn)
        x = xn
        if sn <= config.tol:
            break

    stable = len(supports) - 1
    while stable > 0 and supports[stable - 1] == supports[-1]:
        stable -= 1
    return IterateTrace(
        xs=xs,
        thetas=np.asarray(thetas),
        supports=supports,
        step_norms=np.asarray(step_norms),
        support_stable_from=stable,
    )


@dataclass(frozen=True)
class RateReport:
    slope: object
    r_squared: object
    tail_len: int
    gap_exhausted: bool


def estimate_linear_rate(trace, theta_star):
    """Least-squares slope of log(Theta_k - theta_star) over the
    support-stable tail, excluding gaps at or below 1e-14.

    The leading third of the usable points is dropped as burn-in:
    right after the support freezes the gap still mixes fast-decaying
    modes, and fitting through that transient biases the slope.

    A trace already sitting at theta_star everywhere reports
    GAP-EXHAUSTED; too few usable tail points raises
    RateEstimationError.
    """
    thetas = np.asarray(trace.thetas, dtype=float)
    gaps = thetas - theta_star
    if np.all(gaps <= 1e-14):
        return RateReport(None, None, 0, True)
    if theta_star > thetas.min() + 1e-12:
        raise ValueError("theta_star exceeds the best trace value")
    start = trace.support_stable_from
    if len(thetas) - start < 20:
        raise RateEstimationError("need >= 20 iterations after support stabilization")
    ks = np.arange(len(thetas))[start:]
    g = gaps[start:]
    mask = g > 1e-14
    if int(mask.sum()) < 10:
        raise RateEstimationError("insufficient positive-gap tail for the fit")
    kf = ks[mask]
    y = np.log(g[mask])
    drop = min(len(kf) // 3, len(kf) - 10)
    kf = kf[drop:]
    y = y[drop:]
    slope, intercept = np.polyfit(kf, y, 1)
    resid = y - (slope * kf + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res < 1e-12 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return RateReport(float(slope), float(r2), len(kf), False)


def write_trace_csv(path, trace):
    """Iterate table: k,theta,gap,support_size,step_norm (gap is against
    the best value in the trace)."""
    best = float(np.min(trace.thetas))
    lines = ["k,theta,gap,support_size,step_norm"]
    for k in range(len(trace)):
        lines.append(
            "%d,%s,%s,%d,%s"
            % (
                k,
                repr(float(trace.thetas[k])),
                repr(float(trace.thetas[k]) - best),
                len(trace.supports[k]) if trace.supports else 0,
                repr(float(trace.step_norms[k])),
            )
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
