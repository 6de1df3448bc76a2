import numpy as np
import pytest

from l0quad.certify import (
    ExponentFitError,
    KLSample,
    compare_constant,
    estimate_kl_exponent,
    sample_neighborhood,
    verify_kl_half,
    write_samples_csv,
)
from l0quad.linalg import SymMatrix
from l0quad.subdiff import ProblemSpec, SparsityBall, Theta

DIAG21 = SymMatrix(np.diag([2.0, 1.0]))
PROB21 = ProblemSpec(DIAG21, Theta.SPHERE, SparsityBall(2))
E2 = np.array([0.0, 1.0])


def _synthetic(alpha, c, n=400, seed=0):
    """Samples with dist = c * gap**alpha exactly."""
    rng = np.random.default_rng(seed)
    gaps = np.geomspace(1e-9, 1e-3, n) * rng.uniform(1.0, 1.001, n)
    out = []
    for g in gaps:
        out.append(KLSample(np.zeros(2), float(g), float(c * g**alpha), float(np.sqrt(g)), True))
    return out


def test_exponent_fit_recovers_power_laws():
    for alpha in (0.25, 0.5, 0.75, 0.9):
        est = estimate_kl_exponent(_synthetic(alpha, 2.0))
        assert est.exponent_fit == pytest.approx(alpha, abs=0.01)


def test_constant_hat_is_worst_ratio():
    est = estimate_kl_exponent(_synthetic(0.5, 3.0))
    assert est.constant_hat == pytest.approx(3.0, rel=1e-3)
    assert est.holds


def test_exponent_fit_needs_samples():
    with pytest.raises(ExponentFitError):
        estimate_kl_exponent([])
    few = _synthetic(0.5, 2.0, n=10)
    with pytest.raises(ExponentFitError) as err:
        estimate_kl_exponent(few)
    # the partial constant still travels with the error
    assert err.value.constant_hat == pytest.approx(2.0, rel=1e-2)


def test_exponent_fit_single_bin():
    same = [KLSample(np.zeros(2), 1e-6, 1e-3, 1e-3, True) for _ in range(40)]
    with pytest.raises(ExponentFitError):
        estimate_kl_exponent(same)


def test_sample_neighborhood_respects_window():
    samples = sample_neighborhood(PROB21, E2, delta=0.1, eta=1e-2, n=300, seed=3)
    assert len(samples) >= 30
    for s in samples:
        assert 0.0 < s.gap < 1e-2
        assert 0.0 < s.radius <= 0.1 * (1 + 1e-9)
        assert 1 in np.flatnonzero(s.point != 0.0)


def test_sample_neighborhood_rejects_noncritical():
    with pytest.raises(ValueError):
        sample_neighborhood(PROB21, np.array([0.6, 0.8]), delta=0.1, eta=1e-2, n=10, seed=0)


def test_sampling_deterministic():
    a = sample_neighborhood(PROB21, E2, delta=0.1, eta=1e-2, n=200, seed=5)
    b = sample_neighborhood(PROB21, E2, delta=0.1, eta=1e-2, n=200, seed=5)
    assert len(a) == len(b)
    for s, t in zip(a, b):
        assert np.array_equal(s.point, t.point)
        assert s.gap == t.gap and s.dist == t.dist and s.radius == t.radius


def test_verify_kl_half_diag21():
    cert = verify_kl_half(PROB21, E2, delta=0.1, eta=1e-2, n=400, seed=1)
    assert cert.holds and not cert.vacuous
    assert cert.evidence == "EMPIRICAL"
    assert 1.8 <= cert.c_hat <= 2.0 + 1e-9
    assert 0.45 <= cert.alpha_hat <= 0.55
    assert "EMPIRICAL" in cert.summary()


def test_verify_kl_half_vacuous_on_flat_sphere():
    """A = 0 is constant on the sphere with exact zero gaps: nothing
    lands in the level window."""
    prob = ProblemSpec(SymMatrix(np.zeros((3, 3))), Theta.SPHERE, SparsityBall(3))
    xbar = np.array([1.0, 0.0, 0.0])
    cert = verify_kl_half(prob, xbar, delta=1e-2, eta=1e-2, n=100, seed=0)
    assert cert.vacuous and not cert.holds
    assert "VACUOUS" in cert.summary()


def test_verify_kl_half_flat_spectrum_is_noise():
    """gamma * I is flat only up to rounding; the few float-noise gaps
    that sneak into the window cannot certify anything."""
    prob = ProblemSpec(SymMatrix(np.eye(3) * 1.7), Theta.SPHERE, SparsityBall(3))
    xbar = np.array([1.0, 0.0, 0.0])
    cert = verify_kl_half(prob, xbar, delta=1e-2, eta=1e-2, n=100, seed=0)
    assert not cert.holds


def test_compare_constant_diag21():
    comp = compare_constant(PROB21, E2, delta=0.1, eta=1e-2, n=400, seed=2)
    assert not comp.skipped and not comp.vacuous
    assert comp.c_theory == pytest.approx(1.0)
    assert comp.passed
    assert comp.c_hat >= comp.c_theory


def test_compare_constant_requires_diag_sphere():
    with pytest.raises(ValueError):
        compare_constant(
            ProblemSpec(DIAG21, Theta.SIMPLEX, SparsityBall(2)), np.array([0.0, 1.0])
        )
    nondiag = ProblemSpec(
        SymMatrix(np.array([[1.0, 0.2], [0.2, 1.0]])), Theta.SPHERE, SparsityBall(2)
    )
    with pytest.raises(ValueError):
        compare_constant(nondiag, np.array([1.0, 0.0]))


def test_compare_constant_skips_flat_spectrum():
    prob = ProblemSpec(SymMatrix(np.eye(2) * 3.0), Theta.SPHERE, SparsityBall(2))
    comp = compare_constant(prob, np.array([1.0, 0.0]))
    assert comp.skipped


def test_samples_csv_roundtrip(tmp_path):
    samples = sample_neighborhood(PROB21, E2, delta=0.1, eta=1e-2, n=120, seed=9)
    path = tmp_path / "s.csv"
    write_samples_csv(path, samples)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "radius,gap,dist,ratio,same_support"
    assert len(lines) == len(samples) + 1
    r, g, d, q, ss = lines[1].split(",")
    assert float(r) == samples[0].radius
    assert float(g) == samples[0].gap
    assert float(d) == samples[0].dist
    assert float(q) == pytest.approx(float(samples[0].ratio))
    assert ss in ("0", "1")
