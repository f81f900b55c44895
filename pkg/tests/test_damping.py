import numpy as np
import pytest

from conftest import SQ2, ket, proj
from qdiscord.correlations import entropic_discord, geometric_discord
from qdiscord.damping import (
    ProtocolParams,
    apply_filter,
    apply_local_channels,
    initial_state,
    kraus_ad,
    m_rev,
    m_weak,
    reversal_strength,
    rho_d,
    rho_r,
    rho_r_circuit,
)
from qdiscord.densmat import as_density, trace_norm
from qdiscord.errors import FilterError

GRID = np.round(np.arange(0, 1.0001, 0.1), 10)


@pytest.mark.parametrize("D", GRID)
def test_kraus_completeness(D):
    k0, k1 = kraus_ad(D)
    np.testing.assert_allclose(k0.conj().T @ k0 + k1.conj().T @ k1, np.eye(2), atol=1e-12)


def test_kraus_examples():
    k0, k1 = kraus_ad(0)
    np.testing.assert_array_equal(k0, np.eye(2))
    np.testing.assert_array_equal(k1, np.zeros((2, 2)))
    k0, k1 = kraus_ad(1)
    np.testing.assert_array_equal(k0, np.diag([1, 0]))
    np.testing.assert_array_equal(k1, [[0, 1], [0, 0]])
    k0, k1 = kraus_ad(0.6)
    one = np.diag([0, 1])
    out = k0 @ one @ k0.conj().T + k1 @ one @ k1.conj().T
    np.testing.assert_allclose(out, np.diag([0.6, 0.4]), atol=1e-15)
    with pytest.raises(ValueError):
        kraus_ad(1.2)


def test_initial_state_examples(bell):
    np.testing.assert_array_equal(initial_state(1, 0).matrix, proj(ket(1, 0, 0, 0)))
    np.testing.assert_allclose(initial_state(SQ2, SQ2).matrix, bell.matrix, atol=1e-15)
    b = np.sqrt(1 - 0.42**2)
    m = initial_state(0.42, b).matrix
    assert m[0, 0].real == pytest.approx(0.1764)
    assert m[3, 3].real == pytest.approx(0.8236)
    assert m[0, 3].real == pytest.approx(0.42 * np.sqrt(1 - 0.42**2))
    with pytest.raises(ValueError):
        initial_state(0.5, 0.5)


def test_local_channels_examples(rng):
    rho = as_density(np.diag(rng.dirichlet(np.ones(4))), (2, 2))
    np.testing.assert_allclose(apply_local_channels(rho, 0, 0).matrix, rho.matrix)
    np.testing.assert_allclose(apply_local_channels(rho, 1, 1).matrix, proj(ket(1, 0, 0, 0)), atol=1e-15)


def test_rho_d_examples():
    np.testing.assert_allclose(rho_d(0.6, 0.8, 0, 0).matrix, initial_state(0.6, 0.8).matrix)
    np.testing.assert_allclose(rho_d(0.6, 0.8, 1, 1).matrix, proj(ket(1, 0, 0, 0)), atol=1e-15)
    m = rho_d(SQ2, SQ2, 0.6, 0.8).matrix
    np.testing.assert_allclose(np.diag(m).real, [0.74, 0.06, 0.16, 0.04], atol=1e-14)
    assert m[0, 3].real == pytest.approx(np.sqrt(0.08) * 0.5)
    assert m[0, 3].real == pytest.approx(0.14142, abs=1e-5)


def test_rho_d_matches_channels(rng):
    for _ in range(100):
        a = rng.uniform(0, 1) * np.exp(2j * np.pi * rng.uniform())
        b = np.sqrt(1 - abs(a) ** 2) * np.exp(2j * np.pi * rng.uniform())
        D1, D2 = rng.uniform(0, 1, 2)
        circuit = apply_local_channels(initial_state(a, b), D1, D2)
        assert trace_norm(circuit.matrix - rho_d(a, b, D1, D2).matrix) <= 1e-12


def test_weak_and_reversal_filters():
    np.testing.assert_array_equal(m_weak(0, 0), np.eye(4))
    np.testing.assert_array_equal(m_weak(1, 1), np.diag([1, 0, 0, 0]))
    np.testing.assert_allclose(m_weak(0.5, 0), np.diag([1, 1, SQ2, SQ2]), atol=1e-15)
    np.testing.assert_array_equal(m_rev(0, 0), np.eye(4))
    np.testing.assert_array_equal(m_rev(1, 1), np.diag([0, 0, 0, 1]))
    np.testing.assert_allclose(np.diag(m_rev(0.8, 0)).real, [np.sqrt(0.2)] * 2 + [1, 1])
    with pytest.raises(ValueError):
        m_weak(-0.1, 0)
    with pytest.raises(ValueError):
        m_rev(0, 1.5)


def test_reversal_strength():
    assert reversal_strength(0, 0.3) == 0.3
    assert reversal_strength(1, 0.3) == 1.0
    assert reversal_strength(0.5, 0.6) == pytest.approx(0.8)
    with pytest.raises(ValueError):
        reversal_strength(0.5, 2)


def test_protocol_params():
    pp = ProtocolParams(SQ2, SQ2, 0.6, 0.8, 0.5, 0.25)
    assert pp.pr1 == pytest.approx(0.8) and pp.pr2 == pytest.approx(0.85)
    assert pp.Dbar2 == pytest.approx(0.2) and pp.pbar2 == 0.75
    assert pp.A > 0
    with pytest.raises(ValueError):
        ProtocolParams(0.5, 0.5)
    with pytest.raises(ValueError):
        ProtocolParams(1, 0, D1=1.1)


def test_apply_filter(bell):
    q, out = apply_filter(bell, np.eye(4))
    assert q == pytest.approx(1)
    np.testing.assert_allclose(out.matrix, bell.matrix)
    q, out = apply_filter(bell, np.diag([1, 0, 0, 0]))
    assert q == pytest.approx(0.5)
    np.testing.assert_allclose(out.matrix, proj(ket(1, 0, 0, 0)))
    with pytest.raises(FilterError):
        apply_filter(as_density(proj(ket(0, 0, 0, 1)), (2, 2)), np.diag([1, 0, 0, 0]))


def test_rho_r_examples():
    a, b = 0.6, 0.8
    np.testing.assert_allclose(rho_r(ProtocolParams(a, b, 0.3, 0.7, 1, 1)).matrix,
                               initial_state(a, b).matrix, atol=1e-15)
    np.testing.assert_allclose(rho_r(ProtocolParams(a, b)).matrix, initial_state(a, b).matrix)
    pp = ProtocolParams(SQ2, SQ2, 0.6, 0.6, 0.5, 0.5)
    assert pp.A == pytest.approx(1.345)
    np.testing.assert_allclose(np.diag(rho_r(pp).matrix).real,
                               np.array([0.5 + 0.09 * 0.5, 0.15, 0.15, 0.5]) / 1.345, atol=1e-14)


def test_rho_r_matches_circuit(rng):
    for _ in range(100):
        a = rng.uniform(0, 1) * np.exp(2j * np.pi * rng.uniform())
        b = np.sqrt(1 - abs(a) ** 2) * np.exp(2j * np.pi * rng.uniform())
        pp = ProtocolParams(a, b, *rng.uniform(0, 1, 2), *rng.uniform(0, 0.99, 2))
        q, circuit = rho_r_circuit(pp)
        assert trace_norm(circuit.matrix - rho_r(pp).matrix) <= 1e-12
        assert q == pytest.approx(pp.success_probability, rel=1e-10)


def test_circuit_guards_full_strength():
    with pytest.raises(FilterError):
        rho_r_circuit(ProtocolParams(SQ2, SQ2, 0.6, 0.6, 1.0, 1.0))


def test_states_valid_over_hypercube():
    for a in (0.0, 0.42, SQ2, 1.0):
        b = np.sqrt(1 - a * a)
        for D1 in GRID:
            for D2 in GRID:
                rho_d(a, b, D1, D2)
                for p in GRID[::2]:
                    rho_r(ProtocolParams(a, b, D1, D2, p, p))


def test_protection_monotone_in_p():
    vals = [entropic_discord(rho_r(ProtocolParams(SQ2, SQ2, 0.6, 0.6, p, p))).value
            for p in np.append(np.arange(0, 1, 0.1), 0.999)]
    assert np.all(np.diff(vals) >= -1e-9)


def test_decay_monotone_in_D():
    Ds = np.arange(0, 1.0001, 0.05)
    e = [entropic_discord(rho_d(SQ2, SQ2, D, D)).value for D in Ds]
    g = [geometric_discord(rho_d(SQ2, SQ2, D, D)).value for D in Ds]
    assert np.all(np.diff(e) <= 1e-9) and np.all(np.diff(g) <= 1e-9)
