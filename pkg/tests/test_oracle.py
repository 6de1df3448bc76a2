import numpy as np
import pytest

from l0quad.linalg import SymMatrix
from l0quad.oracle import (
    global_min_enum,
    kl_ratio_scan,
    prox_bruteforce,
    random_feasible_point,
    random_symmetric,
    subdiff_distance_bruteforce,
)
from l0quad.subdiff import (
    ProblemSpec,
    SparsityBall,
    Theta,
    ZeroNorm,
    objective,
    subdiff_distance,
)


def test_global_min_sphere_diag():
    prob = ProblemSpec(SymMatrix(np.diag([-3.0, -1.0])), Theta.SPHERE, SparsityBall(1))
    rep = global_min_enum(prob)
    assert rep.value == pytest.approx(-3.0)
    assert np.allclose(np.abs(rep.argmin), [1.0, 0.0])
    assert rep.supports_examined == 2
    assert not rep.unbounded


def test_global_min_zero_norm_tradeoff():
    # A = I, sphere, nu = 0.1: value 1 + nu*k, k=1 optimal, smallest
    # index wins
    prob = ProblemSpec(SymMatrix(np.eye(3)), Theta.SPHERE, ZeroNorm(0.1))
    rep = global_min_enum(prob)
    assert rep.value == pytest.approx(1.1)
    assert np.count_nonzero(rep.argmin) == 1
    assert rep.argmin[0] != 0.0


def test_global_min_zero_theta_psd():
    prob = ProblemSpec(SymMatrix(np.eye(2)), Theta.ZERO, ZeroNorm(0.5))
    rep = global_min_enum(prob)
    assert rep.value == 0.0
    assert np.array_equal(rep.argmin, np.zeros(2))


def test_global_min_unbounded_zero_theta():
    prob = ProblemSpec(SymMatrix(np.diag([1.0, -0.5])), Theta.ZERO, ZeroNorm(0.5))
    rep = global_min_enum(prob)
    assert rep.unbounded and rep.argmin is None
    assert rep.value == -np.inf


def test_global_min_unbounded_orthant():
    # copositivity fails through the off-diagonal: x = (1,1) direction
    a = SymMatrix(np.array([[1.0, -2.0], [-2.0, 1.0]]))
    prob = ProblemSpec(a, Theta.NONNEG, ZeroNorm(0.5))
    rep = global_min_enum(prob)
    assert rep.unbounded
    # the same matrix is fine on the nonnegative axes alone
    single = ProblemSpec(SymMatrix(np.array([[1.0]])), Theta.NONNEG, ZeroNorm(0.5))
    assert not global_min_enum(single).unbounded


def test_global_min_simplex():
    # min over simplex of x'diag(d)x is 1/sum(1/d) at the interior KKT
    # point when all d > 0
    d = np.array([1.0, 2.0])
    prob = ProblemSpec(SymMatrix(np.diag(d)), Theta.SIMPLEX, SparsityBall(2))
    rep = global_min_enum(prob)
    assert rep.value == pytest.approx(1.0 / (1.0 + 0.5))
    assert rep.argmin == pytest.approx(np.array([2.0, 1.0]) / 3.0)


def test_global_min_argmin_reevaluates():
    rng = np.random.default_rng(0)
    for trial in range(60):
        p = int(rng.integers(2, 6))
        a = random_symmetric(p, rng)
        theta = [Theta.SPHERE, Theta.SIMPLEX, Theta.SPHERE_NONNEG][trial % 3]
        h = ZeroNorm(0.3) if trial % 2 else SparsityBall(int(rng.integers(1, p + 1)))
        prob = ProblemSpec(a, theta, h)
        rep = global_min_enum(prob)
        if theta is Theta.SPHERE_NONNEG and rep.argmin is None:
            continue
        assert abs(objective(prob, rep.argmin) - rep.value) <= 1e-10


def test_global_min_beats_random_points():
    rng = np.random.default_rng(1)
    for trial in range(80):
        p = int(rng.integers(2, 6))
        a = random_symmetric(p, rng)
        theta = [Theta.SPHERE, Theta.SIMPLEX][trial % 2]
        h = SparsityBall(int(rng.integers(1, p + 1)))
        prob = ProblemSpec(a, theta, h)
        rep = global_min_enum(prob)
        for _ in range(30):
            x = random_feasible_point(theta, h, p, rng)
            assert objective(prob, x) >= rep.value - 1e-9


def test_global_min_guard():
    with pytest.raises(ValueError):
        global_min_enum(
            ProblemSpec(SymMatrix(np.eye(13)), Theta.SPHERE, SparsityBall(1))
        )


def test_bruteforce_distance_guard():
    prob = ProblemSpec(SymMatrix(np.eye(11)), Theta.SPHERE, SparsityBall(1))
    x = np.zeros(11)
    x[0] = 1.0
    with pytest.raises(ValueError):
        subdiff_distance_bruteforce(prob, x)


def test_bruteforce_distance_examples():
    a = SymMatrix(np.diag([2.0, 1.0]))
    prob = ProblemSpec(a, Theta.SPHERE, SparsityBall(2))
    x = np.array([1.0, 1.0]) / np.sqrt(2.0)
    assert subdiff_distance_bruteforce(prob, x) == pytest.approx(1.0, abs=1e-9)
    x = np.array([1.0, 0.0])
    b = SymMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert subdiff_distance_bruteforce(
        ProblemSpec(b, Theta.SPHERE, SparsityBall(2)), x
    ) == pytest.approx(2.0, abs=1e-9)


def test_bruteforce_matches_fast_all_pairings():
    rng = np.random.default_rng(2)
    thetas = list(Theta)
    for trial in range(200):
        p = int(rng.integers(2, 6))
        a = random_symmetric(p, rng)
        theta = thetas[trial % 5]
        h = ZeroNorm(float(10 ** rng.uniform(-1, 0))) if trial % 2 else SparsityBall(
            int(rng.integers(1, p + 1))
        )
        prob = ProblemSpec(a, theta, h)
        x = random_feasible_point(theta, h, p, rng)
        fast = subdiff_distance(prob, x).distance
        slow = subdiff_distance_bruteforce(prob, x)
        assert abs(fast - slow) <= 1e-7 * max(1.0, slow)


def test_prox_bruteforce_guard_and_validation():
    with pytest.raises(ValueError):
        prox_bruteforce(Theta.ZERO, ZeroNorm(0.5), np.zeros(9), 1.0)
    with pytest.raises(ValueError):
        prox_bruteforce(Theta.ZERO, ZeroNorm(0.5), np.zeros(3), 0.0)


def test_prox_bruteforce_simple_value():
    rep = prox_bruteforce(Theta.ZERO, ZeroNorm(0.5), np.array([2.0, 0.1]), 1.0)
    assert np.array_equal(rep.argmin, [2.0, 0.0])
    assert rep.value == pytest.approx(0.5 * 0.1**2 + 0.5)


def test_random_feasible_point_domains():
    rng = np.random.default_rng(3)
    for theta in Theta:
        for h in (ZeroNorm(0.5), SparsityBall(2)):
            for _ in range(40):
                x = random_feasible_point(theta, h, 5, rng)
                prob = ProblemSpec(SymMatrix(np.eye(5)), theta, h)
                assert np.isfinite(objective(prob, x))
                if isinstance(h, SparsityBall):
                    assert np.count_nonzero(x) <= h.kappa


def test_kl_ratio_scan_diag21():
    prob = ProblemSpec(SymMatrix(np.diag([2.0, 1.0])), Theta.SPHERE, SparsityBall(2))
    tab = kl_ratio_scan(prob, np.array([0.0, 1.0]), radii=[1e-4, 1e-3, 1e-2], per_radius=60, seed=0)
    assert not tab.vacuous
    per = tab.min_ratio_per_radius()
    for r, v in per.items():
        assert v == pytest.approx(2.0, rel=1e-3)
    assert not tab.decays()


def test_kl_ratio_scan_rejects_noncritical():
    prob = ProblemSpec(SymMatrix(np.diag([2.0, 1.0])), Theta.SPHERE, SparsityBall(2))
    with pytest.raises(ValueError):
        kl_ratio_scan(prob, np.array([0.6, 0.8]), radii=[1e-3])


def test_ratio_table_decay_detection():
    """A fabricated exponent-3/4 table must trip the decay test."""
    from l0quad.oracle import RatioScanTable, ScanRow

    radii = [1e-5, 1e-4, 1e-3, 1e-2]
    rows = []
    for r in radii:
        gap = r**2
        dist = gap**0.75
        rows.append(ScanRow(r, gap, dist, dist / np.sqrt(gap), True))
    tab = RatioScanTable(rows, radii, vacuous=False)
    assert tab.decays()
