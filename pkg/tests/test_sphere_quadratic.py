import numpy as np
import pytest

from l0quad.linalg import SymMatrix
from l0quad.oracle import random_symmetric
from l0quad.sphere_quadratic import (
    crit_points_diag,
    crit_points_general,
    dist_subdiff_sphere_quad,
    kl_constant_theoretical,
    riemannian_grad_norm,
    same_order_window,
)


def test_crit_points_diag_families():
    crit = crit_points_diag(np.array([3.0, 1.0]))
    assert len(crit.representatives) == 4
    assert len(crit.families) == 2
    assert crit.families[0].eigenvalue == 3.0
    assert crit.families[0].indices.indices == (0,)
    # repeated eigenvalue merges into one family
    crit = crit_points_diag(np.array([2.0, 2.0]))
    assert len(crit.families) == 1
    assert crit.families[0].indices.indices == (0, 1)


def test_crit_points_general_offdiag():
    h = np.array([[0.0, 1.0], [1.0, 0.0]])
    crit = crit_points_general(h)
    r = 1.0 / np.sqrt(2.0)
    got = sorted(tuple(np.round(z, 12)) for z in crit.representatives)
    want = sorted(
        [(r, r), (-r, -r), (r, -r), (-r, r)]
    )
    assert np.allclose(got, want)
    for z in crit.representatives:
        assert dist_subdiff_sphere_quad(h, z) < 1e-12


def test_distance_formula_matches_riemannian():
    rng = np.random.default_rng(0)
    for _ in range(200):
        p = int(rng.integers(2, 9))
        h = random_symmetric(p, rng)
        z = rng.standard_normal(p)
        z /= np.linalg.norm(z)
        assert dist_subdiff_sphere_quad(h, z) == pytest.approx(
            riemannian_grad_norm(h, z), abs=1e-12
        )


def test_distance_requires_unit_vector():
    with pytest.raises(ValueError):
        dist_subdiff_sphere_quad(np.eye(2), np.array([1.0, 1.0]))


def test_constant_diag_2_1():
    rep = kl_constant_theoretical(np.array([2.0, 1.0]), np.array([0.0, 1.0]))
    assert rep.lambda_bar == pytest.approx(1.0)
    assert rep.j1bar.indices == (0,)
    assert rep.c_theory == pytest.approx(1.0)
    assert not rep.all_equal


def test_constant_rejects_noncritical():
    with pytest.raises(ValueError):
        kl_constant_theoretical(np.array([2.0, 1.0]), np.array([1.0, 1.0]) / np.sqrt(2))


def test_constant_all_equal_flag():
    rep = kl_constant_theoretical(np.array([1.5, 1.5, 1.5]), np.array([1.0, 0.0, 0.0]))
    assert rep.all_equal and rep.c_theory is None


def test_kl_domination_diag():
    """dist >= c * sqrt(theta gap) near a critical point, inside the
    same-order window."""
    rng = np.random.default_rng(1)
    for trial in range(40):
        p = int(rng.integers(2, 6))
        d = np.sort(rng.standard_normal(p))[::-1] * 2
        if np.max(d) - np.min(d) < 1e-6:
            continue
        i = int(rng.integers(0, p))
        xbar = np.zeros(p)
        xbar[i] = 1.0
        rep = kl_constant_theoretical(d, xbar)
        if rep.all_equal:
            continue
        f_bar = float(d[i])
        h = np.diag(d)
        for _ in range(50):
            v = rng.standard_normal(p)
            v -= (v @ xbar) * xbar
            nv = np.linalg.norm(v)
            if nv < 1e-12:
                continue
            z = xbar + rng.uniform(1e-6, 1e-2) * v / nv
            z /= np.linalg.norm(z)
            if not same_order_window(d, xbar, z):
                continue
            gap = float(z @ h @ z) - f_bar
            if gap <= 0:
                continue
            dist = dist_subdiff_sphere_quad(h, z)
            assert dist >= rep.c_theory * np.sqrt(gap) * (1 - 1e-9)


def test_same_order_window():
    d = np.array([2.0, 1.0])
    xbar = np.array([0.0, 1.0])
    assert same_order_window(d, xbar, xbar)
    # z'Dz = 1.4 makes the off gap |2 - 1.4| = 0.6, inside [0.5, 1.5]
    z = np.array([np.sqrt(0.4), np.sqrt(0.6)])
    assert same_order_window(d, xbar, z)
    # z = e1 flips the gap to 0, outside
    assert not same_order_window(d, xbar, np.array([1.0, 0.0]))


def test_general_matches_eigh():
    rng = np.random.default_rng(2)
    for _ in range(50):
        p = int(rng.integers(2, 7))
        h = random_symmetric(p, rng)
        crit = crit_points_general(h)
        lam = np.linalg.eigvalsh(h.entries)[::-1]
        fam_vals = sorted(f.eigenvalue for f in crit.families)
        # family eigenvalues are a subset of the spectrum (merged ties)
        for fv in fam_vals:
            assert np.min(np.abs(lam - fv)) < 1e-8
        assert len(crit.representatives) == 2 * p
        for z in crit.representatives:
            assert abs(np.linalg.norm(z) - 1.0) < 1e-10
            assert dist_subdiff_sphere_quad(h, z) < 1e-9
