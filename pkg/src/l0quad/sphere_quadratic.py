"""Critical points and sharp-exponent constants for psi(z) = z'Hz on
the unit sphere.

Critical points are exactly the unit eigenvectors of H (Hz = <z,Hz>z);
with repeated eigenvalues they form continuum families, one per
eigenspace.  The subdifferential distance on the sphere has the closed
form 2||Hz - <z,Hz>z||, which is also the Riemannian gradient norm of
z'Hz, and near an isolated-eigenvalue critical point the ratio
dist / sqrt(psi - psi(xbar)) is bounded below by an explicit constant
built from the spectral gaps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import SupportSet, SymMatrix, sym_eig
from .sets import support

_EQ_TOL = 1e-12  # relative tolerance for treating eigenvalues as equal


@dataclass(frozen=True)
class Family:
    """One eigenvalue together with the index block sharing it."""

    eigenvalue: float
    indices: SupportSet


@dataclass(frozen=True)
class SphereCriticalSet:
    representatives: list
    families: list


@dataclass(frozen=True)
class KLConstantReport:
    lambda_bar: float
    j1bar: SupportSet
    c_theory: object  # float, or None when every eigenvalue coincides
    all_equal: bool


def _close(a, b):
    return abs(a - b) <= _EQ_TOL * max(1.0, abs(a), abs(b))


def _group_equal(values):
    """Partition indices into blocks of (chained) equal values."""
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    groups = []
    for i in order:
        if groups and _close(values[groups[-1][-1]], values[i]):
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def crit_points_diag(d):
    """Critical set of z'diag(d)z on the sphere.

    Representatives are the signed coordinate vectors; families group
    the coordinates whose d-values coincide (each family's critical set
    is the whole unit sphere of its coordinate block).
    """
    d = np.asarray(d, dtype=float)
    p = d.size
    reps = []
    for i in range(p):
        e = np.zeros(p)
        e[i] = 1.0
        reps.append(e.copy())
        reps.append(-e)
    fams = [
        Family(float(d[g[0]]), SupportSet(tuple(g), p)) for g in _group_equal(list(d))
    ]
    return SphereCriticalSet(reps, fams)


def crit_points_general(h):
    """Critical set of z'Hz on the sphere via eigendecomposition.

    Representatives are the signed eigenvector columns; family index
    sets refer to eigenvector columns (eigenspace blocks).
    """
    if not isinstance(h, SymMatrix):
        h = SymMatrix(h)
    dec = sym_eig(h)
    base = crit_points_diag(dec.eigenvalues)
    reps = [dec.basis @ w for w in base.representatives]
    return SphereCriticalSet(reps, base.families)


def dist_subdiff_sphere_quad(h, z):
    """Exact subdifferential distance of z'Hz + (sphere indicator) at z."""
    if not isinstance(h, SymMatrix):
        h = SymMatrix(h)
    z = np.asarray(z, dtype=float)
    if abs(np.linalg.norm(z) - 1.0) > 1e-10:
        raise ValueError("z must be a unit vector")
    hz = h.entries @ z
    return 2.0 * float(np.linalg.norm(hz - (z @ hz) * z))


def riemannian_grad_norm(h, z):
    """Norm of the tangential part of the ambient gradient 2Hz."""
    if not isinstance(h, SymMatrix):
        h = SymMatrix(h)
    z = np.asarray(z, dtype=float)
    g = 2.0 * (h.entries @ z)
    return float(np.linalg.norm(g - (z @ g) * z))


def kl_constant_theoretical(d, xbar):
    """Provable ratio constant at a critical point of the diagonal
    sphere quadratic.

    With lambda_bar = <xbar, D xbar> and J1bar the off-support
    coordinates whose d-value differs from lambda_bar, the constant is
    min |d_j - lambda_bar| / sqrt(max |d_j - lambda_bar|) over J1bar.
    When all d-values coincide the objective is constant on the sphere
    and the report carries the all-equal flag instead.
    """
    d = np.asarray(d, dtype=float)
    xbar = np.asarray(xbar, dtype=float)
    if abs(np.linalg.norm(xbar) - 1.0) > 1e-10:
        raise ValueError("xbar must be a unit vector")
    dx = d * xbar
    resid = 2.0 * np.linalg.norm(dx - (xbar @ dx) * xbar)
    if resid > 1e-9:
        raise ValueError("xbar is not critical for the diagonal sphere quadratic")
    p = d.size
    lam = float(xbar @ (d * xbar))
    if np.max(d) - np.min(d) <= _EQ_TOL * max(1.0, np.max(np.abs(d))):
        return KLConstantReport(lam, SupportSet((), p), None, True)
    J = support(xbar)
    j1 = tuple(j for j in J.complement() if not _close(d[j], lam))
    if not j1:
        # criticality forces d = lam on the support, so an empty J1bar
        # means every value equals lam; only reachable through rounding
        return KLConstantReport(lam, SupportSet((), p), None, True)
    gaps = np.abs(d[list(j1)] - lam)
    c = float(np.min(gaps) / np.sqrt(np.max(gaps)))
    return KLConstantReport(lam, SupportSet(j1, p), c, False)


def same_order_window(d, xbar, z):
    """True when z sits where the off-support spectral gaps at z are
    within a factor [1/2, 3/2] of those at xbar; the theoretical ratio
    constant is only claimed on that window."""
    d = np.asarray(d, dtype=float)
    xbar = np.asarray(xbar, dtype=float)
    z = np.asarray(z, dtype=float)
    lam_bar = float(xbar @ (d * xbar))
    lam_z = float(z @ (d * z))
    for j in support(xbar).complement():
        gap = abs(d[j] - lam_bar)
        if gap <= _EQ_TOL * max(1.0, abs(d[j]), abs(lam_bar)):
            continue
        cur = abs(d[j] - lam_z)
        if not (0.5 * gap <= cur <= 1.5 * gap):
            return False
    return True
