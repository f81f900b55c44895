import numpy as np
import pytest
from scipy import stats

from qdiscord.basis_search import (
    PAULI,
    BlochVector,
    MeasurementBasis,
    SearchConfig,
    bloch_to_state,
    gellmann,
    grid_minimize,
    mc_minimize,
    measurement_qubit,
    projectors_qubit,
    qubit_projectors,
    rotation,
    sample_basis_qudit,
    sample_bloch,
    sampled_projectors,
)
from qdiscord.errors import NumericalError

I2 = np.eye(2)


def test_projectors_qubit():
    p0, p1 = projectors_qubit()
    np.testing.assert_array_equal(p0 + p1, I2)
    np.testing.assert_array_equal(p0 @ p1, np.zeros((2, 2)))
    np.testing.assert_array_equal(p0 @ p0, p0)


def test_rotation_substitution():
    X, _, Z = PAULI
    np.testing.assert_allclose(rotation(0, 0), (I2 - 1j * Z) / np.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(rotation(np.pi / 2, 0), (I2 - 1j * X) / np.sqrt(2), atol=1e-15)


def test_rotation_unitary(rng):
    for _ in range(50):
        v = rotation(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        np.testing.assert_allclose(v.conj().T @ v, I2, atol=1e-12)


def test_rotation_range_checks():
    with pytest.raises(ValueError):
        rotation(-0.1, 0)
    with pytest.raises(ValueError):
        rotation(0, 7.0)


def test_measurement_qubit(rng):
    b = measurement_qubit(0, 0)
    np.testing.assert_allclose(b.projectors, np.stack(projectors_qubit()), atol=1e-15)
    for _ in range(50):
        b = measurement_qubit(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        b0, b1 = b.projectors
        np.testing.assert_allclose(b0 + b1, I2, atol=1e-12)
        np.testing.assert_allclose(b0 @ b1, 0, atol=1e-12)
        b.check()


def test_batched_projectors_match_scalar(rng):
    t = rng.uniform(0, np.pi, 7)
    p = rng.uniform(0, 2 * np.pi, 7)
    stack = qubit_projectors(t, p)
    for k in range(7):
        np.testing.assert_allclose(stack[k], measurement_qubit(t[k], p[k]).projectors)


def _axes(theta, phi):
    # Bloch axis of the first projector: 2 B0 - I = m·σ
    b0 = qubit_projectors(theta, phi)[..., 0, :, :]
    return np.stack([np.einsum("...ij,ji->...", b0, s).real for s in PAULI], -1)


def test_first_outcome_axis_z_component():
    t = np.linspace(0, np.pi, 37)
    m = _axes(t, np.zeros_like(t))
    np.testing.assert_allclose(m[:, 2], np.cos(t) ** 2, atol=1e-12)


def test_grid_covers_all_measurements(rng):
    t, p = np.meshgrid(np.linspace(0, np.pi, 181), np.linspace(0, 2 * np.pi, 361), indexing="ij")
    m = _axes(t.ravel(), p.ravel())
    targets = rng.normal(size=(100, 3))
    targets /= np.linalg.norm(targets, axis=1, keepdims=True)
    # outcome swap maps m -> -m, so compare up to sign
    best = np.abs(targets @ m.T).max(axis=1)
    assert np.all(best >= np.cos(np.deg2rad(1.0)))


def test_grid_minimize_examples():
    r = grid_minimize(lambda t, p: np.cos(t))
    assert np.isclose(r.value, -1) and np.isclose(r.theta, np.pi)
    r = grid_minimize(lambda t, p: np.full_like(t, 0.5))
    assert (r.value, r.theta, r.phi) == (0.5, 0.0, 0.0)
    r = grid_minimize(lambda t, p: np.sin(t) ** 2 * (1 + np.cos(p)) / 2)
    assert r.value == 0.0 and r.theta == 0.0


def test_grid_minimize_scalar_objective():
    cfg = SearchConfig(grid_steps_theta=19, grid_steps_phi=37, refine_levels=1)
    r = grid_minimize(lambda t, p: (t - 1.0) ** 2 + (p - 2.0) ** 2, cfg, vectorized=False)
    assert abs(r.theta - 1.0) < 1e-2 and abs(r.phi - 2.0) < 1e-2


def test_grid_minimize_non_finite():
    with pytest.raises(NumericalError) as err:
        grid_minimize(lambda t, p: np.where(t > 1, np.nan, 0.0))
    assert err.value.theta > 1


def test_grid_refinement_monotone():
    f = lambda t, p: np.sin(3 * t + 0.3) * np.cos(2 * p - 0.7) + 0.1 * t
    prev = np.inf
    for n in range(5):
        cfg = SearchConfig(grid_steps_theta=31, grid_steps_phi=61, refine_levels=n)
        v = grid_minimize(f, cfg).value
        assert v <= prev + 1e-12
        prev = v


def test_grid_deterministic():
    f = lambda t, p: np.cos(t) * np.sin(p)
    assert grid_minimize(f) == grid_minimize(f)


@pytest.mark.parametrize("d", range(2, 7))
def test_gellmann_invariants(d):
    g = gellmann(d)
    assert len(g.symmetric) == len(g.antisymmetric) == d * (d - 1) // 2
    assert len(g.diagonal) == d - 1
    lam = g.matrices
    assert len(lam) == d * d - 1
    np.testing.assert_allclose(lam, np.conj(np.swapaxes(lam, 1, 2)), atol=1e-12)
    assert np.abs(np.trace(lam, axis1=1, axis2=2)).max() <= 1e-12
    gram = np.einsum("iab,jba->ij", lam, lam)
    np.testing.assert_allclose(gram, 2 * np.eye(d * d - 1), atol=1e-10)


def test_gellmann_qubit_is_pauli():
    np.testing.assert_array_equal(gellmann(2).matrices, PAULI)
    assert len(gellmann(3)) == 8


def test_gellmann_rejects_small():
    with pytest.raises(ValueError):
        gellmann(1)


def test_sample_bloch_bounds_and_determinism():
    rng = np.random.default_rng(5)
    for d in (2, 3, 4):
        for _ in range(200):
            assert sample_bloch(d, rng).norm <= 1.0
    a = sample_bloch(3, np.random.default_rng(11)).components
    b = sample_bloch(3, np.random.default_rng(11)).components
    np.testing.assert_array_equal(a, b)


def test_sample_bloch_radius_uniform():
    rng = np.random.default_rng(1234)
    r = np.array([sample_bloch(2, rng).norm ** 2 for _ in range(10_000)])
    res = stats.kstest(r, "uniform")
    # 1% critical value of the one-sample KS statistic
    assert res.statistic < 1.63 / np.sqrt(len(r))


def test_bloch_to_state():
    for d in (2, 3, 5):
        np.testing.assert_allclose(bloch_to_state(np.zeros(d * d - 1)), np.eye(d) / d)
    n = np.array([0.36, -0.48, 0.8])
    v = bloch_to_state(BlochVector(2, n / np.sqrt(2)))
    np.testing.assert_allclose(v, (I2 + np.einsum("k,kij->ij", n, PAULI)) / 2, atol=1e-15)


def test_bloch_to_state_can_be_non_positive():
    # |b| = 1 at d = 2 gives eigenvalues (1 ± √2)/2
    v = bloch_to_state(BlochVector(2, np.array([0.0, 0.0, 1.0])))
    assert np.isclose(np.trace(v).real, 1)
    assert np.linalg.eigvalsh(v)[0] < 0


def test_sample_basis_qudit():
    rng = np.random.default_rng(3)
    b = sample_basis_qudit(2, rng).check()
    assert b.projectors.shape == (2, 2, 2)
    for _ in range(20):
        b = sample_basis_qudit(3, rng).check()
        np.testing.assert_allclose(b.projectors.sum(0), np.eye(3), atol=1e-12)


def test_sampled_projectors_prefix_stable():
    # sample i depends only on (seed, i), not on the total budget
    a = sampled_projectors(3, 5000, 9)
    b = sampled_projectors(3, 9000, 9)
    np.testing.assert_array_equal(a, b[:5000])


def test_mc_minimize_constant_and_deterministic():
    cfg = SearchConfig(method="monte-carlo", samples=300, seed=4)
    r = mc_minimize(lambda basis: 0.25, 3, cfg)
    assert r.value == 0.25 and r.evaluations == 300
    f = lambda P: np.abs(P[:, 0, 0, 0] - 0.3)
    r1 = mc_minimize(f, 2, cfg, vectorized=True)
    r2 = mc_minimize(f, 2, cfg, vectorized=True)
    assert r1.value == r2.value
    np.testing.assert_array_equal(r1.basis.projectors, r2.basis.projectors)


def test_mc_scalar_and_vectorized_agree():
    cfg = SearchConfig(method="monte-carlo", samples=200, seed=1)
    f = lambda P: P[..., 0, 1, 1].real
    r1 = mc_minimize(lambda b: f(b.projectors), 3, cfg)
    r2 = mc_minimize(f, 3, cfg, vectorized=True)
    assert r1.value == r2.value


def test_measurement_basis_check_rejects():
    with pytest.raises(ValueError):
        MeasurementBasis(np.stack([np.eye(2), np.eye(2)])).check()


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(samples=0)
    with pytest.raises(ValueError):
        SearchConfig(method="simplex")
