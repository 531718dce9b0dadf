import math

import numpy as np
import pytest

from nrcg_engine.states import (
    InitConfig,
    QubitHamiltonian,
    build_system_hamiltonian,
    dephased_state,
    gibbs_state,
    hamiltonian_diagonal,
    initial_system_state,
    pure_state,
    qubit_b_state,
)

H = QubitHamiltonian()


def test_hamiltonian_defaults_and_validation():
    assert np.allclose(H.matrix, np.diag([0.0, 1.0]))
    with pytest.raises(ValueError):
        QubitHamiltonian(eps1=1.0, eps2=1.0)


def test_gibbs_populations_boltzmann_oracle():
    # oracle: explicit two-level Boltzmann weights
    for kT in (0.5, 1.0, 40.0):
        rho = gibbs_state(H, kT).mat
        z = 1.0 + math.exp(-1.0 / kT)
        assert abs(rho[0, 0].real - 1.0 / z) < 1e-14
        assert abs(rho[1, 1].real - math.exp(-1.0 / kT) / z) < 1e-14
        assert rho[0, 1] == 0


def test_gibbs_limits():
    cold = gibbs_state(H, 1e-8).mat
    assert abs(cold[0, 0].real - 1.0) < 1e-12
    hot = gibbs_state(H, 1e8).mat
    assert abs(hot[0, 0].real - 0.5) < 1e-7
    with pytest.raises(ValueError):
        gibbs_state(H, 0.0)


def test_pure_state_vector_and_angles():
    theta, phi = 0.83 * math.pi, 0.32 * math.pi
    rho = pure_state(theta, phi).mat
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    assert abs(rho[0, 0] - c * c) < 1e-14
    assert abs(rho[1, 1] - s * s) < 1e-14
    assert abs(rho[0, 1] - c * s * np.exp(-1j * phi)) < 1e-14
    assert abs(np.trace(rho @ rho) - 1.0) < 1e-14
    with pytest.raises(ValueError):
        pure_state(-0.1, 0.0)
    with pytest.raises(ValueError):
        pure_state(0.5, 7.0)


def test_dephased_matches_pure_populations():
    theta = 0.79 * math.pi
    pure = pure_state(theta, 1.0).mat
    deph = dephased_state(theta).mat
    assert abs(pure[0, 0] - deph[0, 0]) < 1e-14
    assert abs(pure[1, 1] - deph[1, 1]) < 1e-14
    assert deph[0, 1] == 0


def test_init_config_validation():
    with pytest.raises(ValueError):
        InitConfig(kT=-1.0)
    with pytest.raises(ValueError):
        InitConfig(kT=40.0, n_qubits=4)
    with pytest.raises(ValueError):
        InitConfig(kT=40.0, b_mode="squeezed")
    with pytest.raises(ValueError):
        InitConfig(kT=40.0, b_mode="gibbs")  # needs kT_b
    cfg = InitConfig(kT=40.0, b_mode="gibbs", kT_b=2.0)
    rho_b = qubit_b_state(cfg, H).mat
    assert np.allclose(rho_b, gibbs_state(H, 2.0).mat)


@pytest.mark.parametrize("n_qubits", [2, 3])
def test_initial_state_is_product(n_qubits):
    cfg = InitConfig(kT=40.0, n_qubits=n_qubits, theta=0.6 * math.pi, phi=0.3)
    rho = initial_system_state(cfg, H)
    rho.validate()
    a = gibbs_state(H, 40.0).mat
    b = pure_state(0.6 * math.pi, 0.3).mat
    expected = np.kron(a, b) if n_qubits == 2 else np.kron(np.kron(a, b), a)
    assert np.allclose(rho.mat, expected, atol=1e-14)


def test_system_hamiltonian_is_kronecker_sum():
    h2 = build_system_hamiltonian(H, 2)
    eye = np.eye(2)
    expected = np.kron(H.matrix, eye) + np.kron(eye, H.matrix)
    assert np.allclose(h2, expected, atol=0)
    h3 = build_system_hamiltonian(H, 3)
    assert np.allclose(
        np.diag(h3).real, [0, 1, 1, 2, 1, 2, 2, 3], atol=0
    )
    assert np.allclose(hamiltonian_diagonal(H, 3), np.diag(h3).real, atol=0)
