"""Brute-force reference oracles, deliberately independent of the
closed-form routes they check.

Global minima come from exhaustive support enumeration with exact
per-support solves (eigenvector for sphere blocks, equality-KKT face
candidates for simplex blocks).  Subdifferential distances come from a
dense scan of the scalar multiplier with explicit enumeration of the
sparsity-cone completion branches, polished by golden section.  Proxes
come from support enumeration of the restricted projections.  All of
this is exponential and size-guarded; it exists to catch bugs, not to
be fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .certify import _perturb
from .linalg import SymMatrix, spectral_norm, sym_eig
from .sets import DegenerateInput, project_simplex
from .subdiff import (
    SparsityBall,
    Theta,
    ZeroNorm,
    objective,
    subdiff_distance,
    support,
    theta_value,
)

_METHOD = "support_enumeration"


@dataclass(frozen=True)
class OracleReport:
    value: float
    argmin: object
    supports_examined: int
    method: str = _METHOD
    unbounded: bool = False


def random_symmetric(p, rng, scale=1.0):
    b = rng.standard_normal((p, p)) * scale
    return SymMatrix(0.5 * (b + b.T))


def random_feasible_point(theta, h, p, rng):
    """Random point in dom(theta) n dom(h) with a random support size."""
    limit = h.kappa if isinstance(h, SparsityBall) else p
    s = int(rng.integers(1, limit + 1))
    supp = np.sort(rng.choice(p, size=s, replace=False))
    z = rng.standard_normal(s)
    if theta is Theta.SPHERE:
        nz = np.linalg.norm(z)
        vals = z / nz if nz > 0 else np.ones(s) / np.sqrt(s)
    elif theta is Theta.SPHERE_NONNEG:
        z = np.abs(z) + 1e-3
        vals = z / np.linalg.norm(z)
    elif theta is Theta.SIMPLEX:
        w = np.abs(z) + 0.1
        vals = w / w.sum()
    elif theta is Theta.NONNEG:
        vals = np.abs(z) + 1e-3
    else:
        vals = z
    x = np.zeros(p)
    x[supp] = vals
    return x


def _simplex_face_candidate(h):
    """Interior equality-KKT point of z'Hz on the full face of the
    simplex (all coordinates positive), or None.

    Solves [2H, -e; e', 0][z; w] = [0; 1] by least squares; an
    inconsistent system or a candidate leaving the open face means the
    face interior holds no critical point and smaller faces cover it.
    """
    m = h.shape[0]
    if m == 1:
        return np.array([1.0])
    k = np.zeros((m + 1, m + 1))
    k[:m, :m] = 2.0 * h
    k[:m, m] = -1.0
    k[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    sol, *_ = np.linalg.lstsq(k, rhs, rcond=None)
    if np.linalg.norm(k @ sol - rhs) > 1e-9 * max(1.0, np.abs(h).max()):
        return None
    z = sol[:m]
    if np.min(z) < -1e-10:
        return None
    z = np.maximum(z, 0.0)
    ssum = z.sum()
    if ssum <= 0:
        return None
    return z / ssum


def global_min_enum(problem):
    """Exact global minimum by support enumeration (p <= 12).

    Per support J the restricted problem is solved exactly: bottom
    eigenvector for sphere blocks, positive eigenvectors for
    sphere-orthant blocks, interior KKT candidate for simplex blocks
    (sub-faces are other supports).  For the homogeneous theta kinds
    (zero, orthant) the objective is unbounded below unless every block
    is PSD/copositive; the report then carries unbounded=True and no
    argmin.  Candidates are compared on exactly re-evaluated objective
    values; supports are visited size-then-lex so ties keep the
    smallest support/index.
    """
    p = problem.dim
    if p > 12:
        raise ValueError("global enumeration is guarded to p <= 12")
    limit = problem.h.kappa if isinstance(problem.h, SparsityBall) else p
    examined = 0
    best_val, best_x = np.inf, None

    def consider(x):
        nonlocal best_val, best_x
        val = objective(problem, x)
        if val < best_val:
            best_val, best_x = val, x.copy()

    if problem.theta in (Theta.ZERO, Theta.NONNEG):
        examined += 1
        consider(np.zeros(p))

    scale = max(1.0, float(np.abs(problem.a.entries).max()))
    for size in range(1, limit + 1):
        for J in combinations(range(p), size):
            examined += 1
            block = problem.a.block(J)
            if problem.theta is Theta.ZERO:
                lam_min = sym_eig(SymMatrix(block)).eigenvalues[-1]
                if lam_min < -1e-12 * scale:
                    return OracleReport(-np.inf, None, examined, unbounded=True)
            elif problem.theta is Theta.NONNEG:
                z = _simplex_face_candidate(block)
                if z is not None and float(z @ block @ z) < -1e-12 * scale:
                    return OracleReport(-np.inf, None, examined, unbounded=True)
            elif problem.theta is Theta.SPHERE:
                dec = sym_eig(SymMatrix(block))
                x = np.zeros(p)
                x[list(J)] = dec.basis[:, -1]
                consider(x)
            elif problem.theta is Theta.SPHERE_NONNEG:
                dec = sym_eig(SymMatrix(block))
                for col in range(size):
                    v = dec.basis[:, col]
                    if np.all(v > 0.0):
                        w = v
                    elif np.all(v < 0.0):
                        w = -v
                    else:
                        continue
                    x = np.zeros(p)
                    x[list(J)] = w / np.linalg.norm(w)
                    consider(x)
            elif problem.theta is Theta.SIMPLEX:
                z = _simplex_face_candidate(block)
                if z is not None:
                    x = np.zeros(p)
                    x[list(J)] = z
                    consider(x)

    if best_x is None:
        raise RuntimeError("no feasible candidate found")
    return OracleReport(float(best_val), best_x, examined)


def _branch_residuals(theta, c, omega):
    """Signed per-coordinate residual off the support once the theta
    multiplier's off-support slack is used optimally."""
    if theta in (Theta.NONNEG, Theta.SPHERE_NONNEG):
        return np.minimum(0.0, c)
    if theta is Theta.SIMPLEX:
        return np.minimum(0.0, c + omega)
    return c  # zero / sphere: no off-support slack


def _block_norm_sq(theta, cJ, xJ, omega):
    if theta in (Theta.SPHERE, Theta.SPHERE_NONNEG):
        r = cJ + omega * xJ
    elif theta is Theta.SIMPLEX:
        r = cJ + omega
    else:
        r = cJ
    return float(r @ r)


def _golden(f, lo, hi, iters=90):
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = f(d)
    m = 0.5 * (a + b)
    return m, f(m)


def subdiff_distance_bruteforce(problem, x, grid_points=100001):
    """Reference subdifferential distance (p <= 10).

    Enumerates every completion branch of the sparsity cone explicitly
    and scans the scalar theta multiplier over a bracketed dense grid
    (golden-section polish per branch).  Returns the minimal distance.
    """
    p = problem.dim
    if p > 10:
        raise ValueError("brute-force distance is guarded to p <= 10")
    x = np.asarray(x, dtype=float)
    if not np.isfinite(objective(problem, x)):
        raise ValueError("x is not in the domain of the objective")
    J = support(x)
    jl = list(J)
    c = 2.0 * (problem.a.entries @ x)
    cJ, xJ = c[jl], x[jl]
    comp = list(J.complement())

    slack = isinstance(problem.h, SparsityBall) and len(J) < problem.h.kappa
    if slack:
        branches = list(combinations(range(len(comp)), problem.h.kappa - len(J)))
    else:
        branches = [()]
    cbar = c[comp] if comp else np.empty(0)

    theta = problem.theta
    scans_omega = theta in (Theta.SPHERE, Theta.SIMPLEX, Theta.SPHERE_NONNEG)

    def total_sq(omega, br):
        v = _block_norm_sq(theta, cJ, xJ, omega)
        if br:
            s = _branch_residuals(theta, cbar[list(br)], omega)
            v += float(s @ s)
        return v

    if not scans_omega:
        best = min(total_sq(None, br) for br in branches)
        return float(np.sqrt(best))

    radius = 2.0 * spectral_norm(problem.a) * float(np.linalg.norm(x)) + 1.0
    grid = np.linspace(-radius, radius, grid_points)
    # block term is a quadratic in omega; off-support residuals only
    # depend on omega for the simplex
    if theta is Theta.SIMPLEX:
        blk = (
            float(cJ @ cJ)
            + 2.0 * grid * float(np.sum(cJ))
            + grid**2 * len(jl)
        )
        off_sq = np.minimum(0.0, cbar[:, None] + grid[None, :]) ** 2 if comp else None
    else:
        blk = (
            float(cJ @ cJ)
            + 2.0 * grid * float(cJ @ xJ)
            + grid**2 * float(xJ @ xJ)
        )
        off_sq = None

    best = np.inf
    for br in branches:
        vals = blk.copy()
        if br:
            if theta is Theta.SIMPLEX:
                vals = vals + off_sq[list(br)].sum(axis=0)
            else:
                s = _branch_residuals(theta, cbar[list(br)], None)
                vals = vals + float(s @ s)
        i = int(np.argmin(vals))
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, grid_points - 1)]
        _, fv = _golden(lambda w: total_sq(w, br), lo, hi)
        best = min(best, float(vals[i]), fv)
    return float(np.sqrt(max(best, 0.0)))


def prox_bruteforce(theta, h, u, t):
    """Reference prox by support enumeration (p <= 8): per support the
    restricted projection is closed-form, values are compared exactly."""
    u = np.asarray(u, dtype=float)
    p = u.size
    if p > 8:
        raise ValueError("brute-force prox is guarded to p <= 8")
    if not t > 0:
        raise ValueError("t must be positive")
    zn = isinstance(h, ZeroNorm)
    limit = p if zn else h.kappa

    def hval(x):
        nnz = int(np.count_nonzero(x != 0.0))
        return h.nu * nnz if zn else 0.0

    best_val, best_x = np.inf, None
    examined = 0
    if theta in (Theta.ZERO, Theta.NONNEG):
        examined += 1
        z = np.zeros(p)
        val = 0.5 * float(u @ u)
        if val < best_val:
            best_val, best_x = val, z
    for size in range(1, limit + 1):
        for J in combinations(range(p), size):
            examined += 1
            uj = u[list(J)]
            if theta is Theta.ZERO:
                xj = uj
            elif theta is Theta.NONNEG:
                xj = np.maximum(uj, 0.0)
            elif theta is Theta.SPHERE:
                nrm = np.linalg.norm(uj)
                if nrm == 0.0:
                    continue
                xj = uj / nrm
            elif theta is Theta.SPHERE_NONNEG:
                w = np.maximum(uj, 0.0)
                nrm = np.linalg.norm(w)
                if nrm == 0.0:
                    continue
                xj = w / nrm
            elif theta is Theta.SIMPLEX:
                xj = project_simplex(uj)
            x = np.zeros(p)
            x[list(J)] = xj
            val = 0.5 * float(np.sum((x - u) ** 2)) + t * hval(x)
            if val < best_val:
                best_val, best_x = val, x
    if best_x is None:
        raise DegenerateInput("restricted projections are multivalued everywhere")
    return OracleReport(float(best_val), best_x, examined)


@dataclass(frozen=True)
class ScanRow:
    radius: float
    gap: float
    dist: float
    ratio: float
    same_support: bool


@dataclass(frozen=True)
class RatioScanTable:
    rows: list
    radii: list
    vacuous: bool

    def min_ratio_per_radius(self):
        out = {}
        for r in self.radii:
            vals = [row.ratio for row in self.rows if row.radius == r]
            out[r] = min(vals) if vals else None
        return out

    def decays(self):
        """True when the worst ratio shrinks with the radius (the
        sharp-exponent claim would fail in the limit)."""
        per = self.min_ratio_per_radius()
        pts = [(r, v) for r, v in per.items() if v is not None and v > 0]
        if len(pts) < 2:
            return False
        lr = np.log([r for r, _ in pts])
        lv = np.log([v for _, v in pts])
        slope = float(np.polyfit(lr, lv, 1)[0])
        smallest = min(pts)[1]
        largest = max(pts)[1]
        return slope > 0.1 and smallest < 0.5 * largest


def kl_ratio_scan(problem, xbar, radii, per_radius=50, seed=0):
    """Ratio table at fixed radii around a critical point.

    Rows keep the nominal radius so per-radius minima group cleanly;
    candidates alternate between same-support and support-growing moves
    when the sparsity ball has slack.  vacuous=True when no candidate
    produced a positive gap anywhere.
    """
    xbar = np.asarray(xbar, dtype=float)
    base = subdiff_distance(problem, xbar)
    if base.distance > 1e-8:
        raise ValueError("xbar is not critical")
    rng = np.random.default_rng(seed)
    J = support(xbar)
    jl = list(J)
    p = problem.dim
    comp = list(J.complement())
    grow = isinstance(problem.h, SparsityBall) and len(J) < problem.h.kappa and comp
    f_bar = objective(problem, xbar)

    rows = []
    for r in radii:
        for i in range(per_radius):
            if grow and (i % 2 == 1 or not jl):
                extra = 1 + (i % min(problem.h.kappa - len(J), len(comp)))
                picks = rng.choice(len(comp), size=extra, replace=False)
                idx = sorted(jl + [comp[g] for g in sorted(picks)])
            elif jl:
                idx = jl
            else:
                continue
            x = _perturb(problem, xbar, idx, r, rng)
            gap = objective(problem, x) - f_bar
            if not (np.isfinite(gap) and gap > 0.0):
                continue
            sx = support(x)
            if not set(jl) <= set(sx.indices):
                continue
            dist = subdiff_distance(problem, x).distance
            rows.append(
                ScanRow(float(r), float(gap), float(dist), float(dist / np.sqrt(gap)), list(sx.indices) == jl)
            )
    return RatioScanTable(rows, [float(r) for r in radii], vacuous=not rows)
