"""Empirical sharp-exponent (KL-1/2) certification around critical points.

Samples feasible points near a verified critical point xbar inside the
level window 0 < Theta(x) - Theta(xbar) < eta, records the ratio
dist(0, dTheta(x)) / sqrt(gap), and fits the lower envelope of
log(dist) against log(gap).  The property holds empirically when the
worst ratio stays away from zero and the envelope slope is about 1/2.
All verdicts are labelled EMPIRICAL; nothing here is a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .sets import project_simplex
from .sphere_quadratic import kl_constant_theoretical, same_order_window
from .subdiff import SparsityBall, Theta, objective, subdiff_distance, support

DEFAULT_DELTA = 1e-2
DEFAULT_ETA = 1e-2
DEFAULT_N = 500


class ExponentFitError(RuntimeError):
    """Exponent fit unavailable; carries the partial ratio constant."""

    def __init__(self, msg, constant_hat=None):
        super().__init__(msg)
        self.constant_hat = constant_hat


@dataclass(frozen=True)
class KLSample:
    point: np.ndarray
    gap: float
    dist: float
    radius: float
    same_support: bool

    @property
    def ratio(self):
        return self.dist / np.sqrt(self.gap)


@dataclass(frozen=True)
class KLEstimate:
    exponent_fit: float
    constant_hat: float
    n_samples: int
    delta: float
    eta: float

    @property
    def holds(self):
        return self.constant_hat > 0 and self.exponent_fit <= 0.6


@dataclass(frozen=True)
class KLCertificate:
    holds: bool
    vacuous: bool
    c_hat: object
    alpha_hat: object
    n_samples: int
    samples: list
    delta: float
    eta: float
    evidence: str = field(default="EMPIRICAL")

    def summary(self):
        if self.vacuous:
            return "KL-1/2 check VACUOUS: no sample fell in the level window (%s)" % self.evidence
        alpha = "n/a" if self.alpha_hat is None else "%.6g" % self.alpha_hat
        verdict = "holds" if self.holds else "FAILS"
        return "KL-1/2 %s (%s): c_hat=%.6g alpha_hat=%s over %d samples" % (
            verdict,
            self.evidence,
            self.c_hat,
            alpha,
            self.n_samples,
        )


def _perturb(problem, xbar, idx, r, rng):
    """One candidate at nominal step r, supported inside idx.

    Tangential step for the sphere kinds, zero-sum step + reprojection
    for the simplex, plain random step otherwise; grown coordinates of
    orthant-constrained points take positive steps so the candidate has
    a chance of staying feasible.
    """
    x = xbar.copy()
    block = xbar[idx]
    k = len(idx)
    theta = problem.theta
    if theta in (Theta.SPHERE, Theta.SPHERE_NONNEG):
        v = rng.standard_normal(k)
        v = v - (v @ block) * block
        nv = np.linalg.norm(v)
        if nv < 1e-12:
            return xbar.copy()  # no tangent direction; filtered out by gap > 0
        step = block + r * (v / nv)
        x[idx] = step / np.linalg.norm(step)
        return x
    if theta is Theta.SIMPLEX:
        v = rng.standard_normal(k)
        v = v - v.mean()
        nv = np.linalg.norm(v)
        if nv < 1e-12:
            return xbar.copy()
        x[idx] = project_simplex(block + r * (v / nv))
        return x
    v = rng.standard_normal(k)
    if theta is Theta.NONNEG:
        grown = np.asarray([xbar[i] == 0.0 for i in idx])
        v = np.where(grown, np.abs(v), v)
    nv = np.linalg.norm(v)
    if nv < 1e-12:
        return xbar.copy()
    x[idx] = block + r * (v / nv)
    return x


def sample_neighborhood(problem, xbar, delta=DEFAULT_DELTA, eta=DEFAULT_ETA, n=DEFAULT_N, seed=0):
    """Draw n candidates around a critical xbar, keep the ones inside
    the ball and the level window.

    Candidates split between same-support perturbations (log-spaced
    radii in [delta*1e-6, delta]) and, when the sparsity ball has slack,
    support-growing perturbations over supersets of the support.
    Candidates leaving the domain, the window, or the support filter
    (supp(x) must contain supp(xbar)) are discarded.  Fixed seed gives a
    bit-identical sample list.
    """
    xbar = np.asarray(xbar, dtype=float)
    if not (delta > 0 and eta > 0 and n >= 1):
        raise ValueError("delta, eta must be positive and n >= 1")
    base = subdiff_distance(problem, xbar)
    if base.distance > 1e-8:
        raise ValueError("xbar is not critical (subdifferential distance %g)" % base.distance)
    rng = np.random.default_rng(seed)
    J = support(xbar)
    jl = list(J)
    p = problem.dim
    f_bar = objective(problem, xbar)

    grow = (
        isinstance(problem.h, SparsityBall)
        and len(J) < problem.h.kappa
        and len(J) < p
    )
    n_grow = n // 2 if grow else 0
    n_same = n - n_grow

    samples = []

    def consider(x):
        gap = objective(problem, x) - f_bar
        if not 0.0 < gap < eta:
            return
        sx = support(x)
        if not set(jl) <= set(sx.indices):
            return
        radius = float(np.linalg.norm(x - xbar))
        if radius <= 0.0 or radius > delta * (1 + 1e-12):
            return
        dist = subdiff_distance(problem, x).distance
        samples.append(
            KLSample(x, float(gap), float(dist), radius, list(sx.indices) == jl)
        )

    if jl:
        for r in np.geomspace(delta * 1e-6, delta, n_same):
            consider(_perturb(problem, xbar, jl, r, rng))
    if grow:
        comp = list(J.complement())
        max_extra = min(problem.h.kappa - len(J), len(comp))
        for i, r in enumerate(np.geomspace(delta * 1e-6, delta, n_grow)):
            s = 1 + (i % max_extra)
            picks = rng.choice(len(comp), size=s, replace=False)
            idx = sorted(jl + [comp[g] for g in sorted(picks)])
            consider(_perturb(problem, xbar, idx, r, rng))
    return samples


def estimate_kl_exponent(samples, delta=None, eta=None):
    """Fit the lower envelope of log(dist) vs log(gap).

    c_hat is the worst ratio dist/sqrt(gap) over every sample; the
    exponent comes from a least-squares fit over per-bin minima (20
    log-bins).  Needs at least 30 samples spanning more than one bin,
    otherwise raises ExponentFitError carrying the partial c_hat.
    """
    if not samples:
        raise ExponentFitError("no samples")
    gaps = np.array([s.gap for s in samples])
    dists = np.array([s.dist for s in samples])
    chat = float(np.min(dists / np.sqrt(gaps)))
    if len(samples) < 30:
        raise ExponentFitError("need >= 30 samples for the exponent fit", chat)
    gmin, gmax = gaps.min(), gaps.max()
    if not gmax > gmin:
        raise ExponentFitError("all gaps identical; no exponent information", chat)
    edges = np.geomspace(gmin, gmax, 21)
    which = np.clip(np.searchsorted(edges, gaps, side="right") - 1, 0, 19)
    env_g, env_d = [], []
    for b in range(20):
        mask = which == b
        if not mask.any():
            continue
        i = np.argmin(np.where(mask, dists, np.inf))
        env_g.append(gaps[i])
        env_d.append(dists[i])
    if len(env_g) < 2:
        raise ExponentFitError("samples span a single bin", chat)
    pos = [(g, d) for g, d in zip(env_g, env_d) if d > 0]
    if len(pos) < 2:
        raise ExponentFitError("envelope has no positive distances", chat)
    lg = np.log([g for g, _ in pos])
    ld = np.log([d for _, d in pos])
    slope = float(np.polyfit(lg, ld, 1)[0])
    return KLEstimate(
        exponent_fit=slope,
        constant_hat=chat,
        n_samples=len(samples),
        delta=delta if delta is not None else float(max(s.radius for s in samples)),
        eta=eta if eta is not None else float(gmax),
    )


def verify_kl_half(problem, xbar, delta=DEFAULT_DELTA, eta=DEFAULT_ETA, n=DEFAULT_N, seed=0):
    """Sample + estimate; returns a KLCertificate.

    `holds` means the worst ratio stays above 1e-6 and, when the
    exponent was estimable, the envelope slope is <= 0.6.  An empty
    sample set flags the check VACUOUS instead (e.g. isolated minima
    whose level window is empty nearby).
    """
    samples = sample_neighborhood(problem, xbar, delta, eta, n, seed)
    if not samples:
        return KLCertificate(False, True, None, None, 0, [], delta, eta)
    try:
        est = estimate_kl_exponent(samples, delta, eta)
        chat, alpha = est.constant_hat, est.exponent_fit
    except ExponentFitError as err:
        chat, alpha = err.constant_hat, None
    holds = chat is not None and chat >= 1e-6 and (alpha is None or alpha <= 0.6)
    return KLCertificate(holds, False, chat, alpha, len(samples), samples, delta, eta)


@dataclass(frozen=True)
class ConstantComparison:
    skipped: bool
    vacuous: bool
    c_theory: object
    c_hat: object
    n_used: int
    passed: object


def compare_constant(problem, xbar, delta=DEFAULT_DELTA, eta=DEFAULT_ETA, n=DEFAULT_N, seed=0):
    """Empirical worst ratio vs the provable diagonal-sphere constant.

    Requires a diagonal A and theta = sphere.  Only samples inside the
    spectral-gap window where the constant is claimed (factor [1/2,3/2]
    around the gaps at xbar) enter the comparison.  Degenerate spectra
    (single eigenvalue) are reported as skipped.
    """
    if problem.theta is not Theta.SPHERE:
        raise ValueError("constant comparison is defined for theta = sphere")
    a = problem.a.entries
    if np.max(np.abs(a - np.diag(np.diag(a)))) > 1e-12:
        raise ValueError("constant comparison needs a diagonal A")
    d = np.diag(a)
    rep = kl_constant_theoretical(d, np.asarray(xbar, dtype=float))
    if rep.all_equal:
        return ConstantComparison(True, False, None, None, 0, None)
    samples = sample_neighborhood(problem, xbar, delta, eta, n, seed)
    used = [s for s in samples if same_order_window(d, xbar, s.point)]
    if not used:
        return ConstantComparison(False, True, rep.c_theory, None, 0, None)
    chat = float(min(s.ratio for s in used))
    passed = bool(chat >= rep.c_theory * (1 - 1e-6))
    return ConstantComparison(False, False, rep.c_theory, chat, len(used), passed)


def write_samples_csv(path, samples):
    """Per-sample table: radius,gap,dist,ratio,same_support."""
    lines = ["radius,gap,dist,ratio,same_support"]
    for s in samples:
        lines.append(
            "%s,%s,%s,%s,%d"
            % (repr(s.radius), repr(s.gap), repr(s.dist), repr(float(s.ratio)), int(s.same_support))
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
