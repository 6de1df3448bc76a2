"""Projections onto the constraint sets and normal/tangent cone queries.

Sets: unit sphere S, probability simplex D, nonnegative orthant,
sparsity ball {||x||_0 <= kappa}, and the intersections S n {sparse},
D n {sparse}.  Support is exact: an entry counts as nonzero iff it is
not 0.0, no tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .linalg import SupportSet, top_k_indices

FEAS_TOL = 1e-10  # absolute feasibility tolerance for membership checks


class DegenerateInput(ValueError):
    """Projection or prox is multivalued at this input (e.g. 0 onto the sphere)."""


@dataclass(frozen=True)
class ConeQueryResult:
    contained: bool
    witness: object = None  # completion branch Jhat (SupportSet) when it exists
    regular_contained: bool = False


def support(x):
    x = np.asarray(x, dtype=float)
    return SupportSet.from_vector(x)


def project_sparsity(u, kappa):
    """Nearest point with at most kappa nonzeros: keep the kappa
    largest magnitudes (smaller index wins ties), zero the rest."""
    u = np.asarray(u, dtype=float)
    if not 1 <= kappa <= u.size:
        raise ValueError("kappa must be in [1, p]")
    keep = top_k_indices(u, kappa)
    out = np.zeros_like(u)
    idx = list(keep)
    out[idx] = u[idx]
    return out


def project_sphere(u):
    u = np.asarray(u, dtype=float)
    nrm = np.linalg.norm(u)
    if nrm == 0.0:
        raise DegenerateInput("projection of 0 onto the sphere is multivalued")
    return u / nrm


def project_nonneg(u):
    return np.maximum(np.asarray(u, dtype=float), 0.0)


def project_simplex(u):
    """Euclidean projection onto {x >= 0, sum x = 1}.

    Sorting form of the KKT solution: x_i = max(u_i - tau, 0) where tau
    makes the positive part sum to one.
    """
    u = np.asarray(u, dtype=float)
    if u.size == 0:
        raise ValueError("empty input")
    s = np.sort(u)[::-1]
    css = np.cumsum(s) - 1.0
    ks = np.arange(1, u.size + 1)
    cond = s - css / ks > 0
    rho = np.nonzero(cond)[0][-1]
    tau = css[rho] / (rho + 1.0)
    return np.maximum(u - tau, 0.0)


def project_sparse_sphere(u, kappa):
    """Projection onto S n {||x||_0 <= kappa}: keep the top-kappa
    magnitudes, normalize.  Exact because the best support maximizes
    the kept mass ||u_J||."""
    u = np.asarray(u, dtype=float)
    if not 1 <= kappa <= u.size:
        raise ValueError("kappa must be in [1, p]")
    keep = top_k_indices(u, kappa)
    idx = list(keep)
    block = u[idx]
    nrm = np.linalg.norm(block)
    if nrm == 0.0:
        raise DegenerateInput("top-kappa block of u is zero; projection multivalued")
    out = np.zeros_like(u)
    out[idx] = block / nrm
    return out


def project_sparse_simplex(u, kappa):
    """Projection onto D n {||x||_0 <= kappa}: select the kappa largest
    entries by value (not magnitude; negatives get clipped anyway),
    project that subvector onto the simplex.  Agrees with exhaustive
    support enumeration (oracle-tested for p <= 10)."""
    u = np.asarray(u, dtype=float)
    if not 1 <= kappa <= u.size:
        raise ValueError("kappa must be in [1, p]")
    order = np.lexsort((np.arange(u.size), -u))
    idx = np.sort(order[:kappa])
    out = np.zeros_like(u)
    out[idx] = project_simplex(u[idx])
    return out


def normal_cone_sparsity_contains(xbar, v, kappa):
    """Membership of v in the limiting normal cone of {||x||_0 <= kappa} at xbar.

    At ||xbar||_0 = kappa the cone is {v : v_J = 0} (equal to the regular
    cone there).  At ||xbar||_0 < kappa it is the union over completions
    Jhat of the support to size kappa of {v : v_{J u Jhat} = 0}, while
    the regular cone collapses to {0}.  Returns a witness completion
    when membership holds through one.
    """
    xbar = np.asarray(xbar, dtype=float)
    v = np.asarray(v, dtype=float)
    if xbar.shape != v.shape:
        raise ValueError("shape mismatch")
    J = support(xbar)
    if not 1 <= kappa <= xbar.size:
        raise ValueError("kappa must be in [1, p]")
    if len(J) > kappa:
        raise ValueError("xbar is infeasible: ||xbar||_0 > kappa")
    on_support_zero = bool(np.all(np.abs(v[list(J)]) <= FEAS_TOL)) if len(J) else True
    if len(J) == kappa:
        return ConeQueryResult(on_support_zero, None, regular_contained=on_support_zero)
    # slack case: need kappa - |J| additional zero coordinates off the support
    regular = bool(np.all(np.abs(v) <= FEAS_TOL))
    if not on_support_zero:
        return ConeQueryResult(False, None, regular_contained=regular)
    need = kappa - len(J)
    comp = J.complement()
    zeros_off = [i for i in comp if abs(v[i]) <= FEAS_TOL]
    if len(zeros_off) < need:
        return ConeQueryResult(False, None, regular_contained=regular)
    witness = SupportSet(tuple(zeros_off[:need]), xbar.size)
    return ConeQueryResult(True, witness, regular_contained=regular)


def _check_simplex_member(xbar):
    xbar = np.asarray(xbar, dtype=float)
    if np.any(xbar < -FEAS_TOL) or abs(xbar.sum() - 1.0) > FEAS_TOL:
        raise ValueError("xbar is not in the simplex")
    return xbar


def _piecewise_quad_min(a, b, hinge_sign):
    """Minimize f(w) = sum_j (a_j + w)^2 + sum_i max(0, s*(b_i + w))^2 over w.

    s = hinge_sign in {-1, +1}.  Convex piecewise quadratic; exact
    minimization by enumerating the kink intervals.  Returns (w*, f*).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    kinks = np.sort(-b)
    edges = np.concatenate(([-np.inf], kinks, [np.inf]))

    def value(w):
        h = hinge_sign * (b + w)
        return float(np.sum((a + w) ** 2) + np.sum(np.maximum(h, 0.0) ** 2))

    best_w, best_f = None, np.inf
    for lo, hi in zip(edges[:-1], edges[1:]):
        if lo == hi:
            continue
        mid = _interval_point(lo, hi)
        active = hinge_sign * (b + mid) > 0
        cnt = a.size + int(np.count_nonzero(active))
        if cnt == 0:
            w = _interval_point(lo, hi)
        else:
            w = -(a.sum() + b[active].sum()) / cnt
            w = min(max(w, lo), hi)
        if not np.isfinite(w):
            continue
        f = value(w)
        if f < best_f:
            best_w, best_f = w, f
    return best_w, best_f


def _interval_point(lo, hi):
    if np.isfinite(lo) and np.isfinite(hi):
        return 0.5 * (lo + hi)
    if np.isfinite(lo):
        return lo + 1.0
    if np.isfinite(hi):
        return hi - 1.0
    return 0.0


def normal_cone_simplex_residual(xbar, v):
    """Distance from v to the simplex normal cone at xbar, with the
    minimizing scalar.

    The cone at xbar in D is {xi : xi_J = w e_J, xi_i <= w off the
    support}; the squared distance as a function of w is piecewise
    quadratic and is minimized exactly over its breakpoints.  Returns
    (residual, omega).
    """
    xbar = _check_simplex_member(xbar)
    v = np.asarray(v, dtype=float)
    if v.shape != xbar.shape:
        raise ValueError("shape mismatch")
    J = list(support(xbar))
    Jbar = [i for i in range(xbar.size) if i not in set(J)]
    # f(omega) = ||v_J - omega e||^2 + sum_off max(v_i - omega, 0)^2, with w = -omega
    w, f = _piecewise_quad_min(-v[J], -v[Jbar] if Jbar else np.empty(0), hinge_sign=-1.0)
    omega = w
    return float(np.sqrt(max(f, 0.0))), float(omega)


def tangent_simplex_contains(xbar, d):
    """Tangent cone test at xbar in D: zero-sum direction, nonnegative
    off the support."""
    xbar = _check_simplex_member(xbar)
    d = np.asarray(d, dtype=float)
    if d.shape != xbar.shape:
        raise ValueError("shape mismatch")
    if abs(d.sum()) > 1e-12:
        return False
    off = [i for i in range(xbar.size) if xbar[i] == 0.0]
    return bool(np.all(d[off] >= -1e-12)) if off else True


def enumerate_sparsity_cone(xbar, v, kappa):
    """Slow reference membership test: explicit union over completion
    branches.  Used by tests; kept here so both routes share nothing
    but the definition."""
    xbar = np.asarray(xbar, dtype=float)
    v = np.asarray(v, dtype=float)
    J = list(support(xbar))
    if len(J) > kappa:
        raise ValueError("infeasible xbar")
    comp = [i for i in range(xbar.size) if i not in set(J)]
    if len(J) == kappa:
        return bool(np.all(np.abs(v[J]) <= FEAS_TOL)) if J else True
    need = kappa - len(J)
    for jhat in combinations(comp, need):
        idx = J + list(jhat)
        if np.all(np.abs(v[idx]) <= FEAS_TOL):
            return True
    return False
