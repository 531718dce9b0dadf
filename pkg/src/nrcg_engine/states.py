"""Hamiltonians and initial-state construction.

Energies are expressed in units of the excited-state splitting (eps2 = 1 by
default) with the Boltzmann constant absorbed into the temperature, so all
temperatures are carried as kT values in the same units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, kron

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QubitHamiltonian:
    """Diagonal single-qubit Hamiltonian diag(eps1, eps2)."""

    eps1: float = 0.0
    eps2: float = 1.0

    def __post_init__(self):
        if not self.eps2 > self.eps1:
            raise ValueError("excited level eps2 must lie above eps1")

    @property
    def matrix(self) -> np.ndarray:
        return np.diag([self.eps1, self.eps2]).astype(complex)


@dataclass(frozen=True)
class InitConfig:
    """Initialization of the working medium.

    Qubits A (and C, when present) start in identical Gibbs states at
    temperature ``kT``.  Qubit B starts per ``b_mode``:

    - "pure":      cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
    - "dephased":  same populations as the pure state, no coherence
    - "gibbs":     Gibbs state at temperature ``kT_b``
    """

    kT: float
    n_qubits: int = 3
    b_mode: str = "pure"
    theta: float = 0.0
    phi: float = 0.0
    kT_b: float | None = None

    def __post_init__(self):
        if self.kT <= 0:
            raise ValueError("kT must be positive")
        if self.n_qubits not in (2, 3):
            raise ValueError("system size must be 2 or 3 qubits")
        if self.b_mode not in ("pure", "dephased", "gibbs"):
            raise ValueError("unknown qubit-B mode %r" % self.b_mode)
        if self.b_mode in ("pure", "dephased"):
            _check_angles(self.theta, self.phi)
        if self.b_mode == "gibbs" and (self.kT_b is None or self.kT_b <= 0):
            raise ValueError("gibbs mode needs a positive kT_b")


def _check_angles(theta: float, phi: float):
    if not 0.0 <= theta <= math.pi + 1e-12:
        raise ValueError("theta must lie in [0, pi]")
    if not 0.0 <= phi <= TWO_PI + 1e-12:
        raise ValueError("phi must lie in [0, 2pi]")


def gibbs_state(h: QubitHamiltonian, kT: float) -> DensityMatrix:
    """Thermal equilibrium state diag(e^{-eps1/kT}, e^{-eps2/kT}) / Z."""
    if kT <= 0:
        raise ValueError("kT must be positive")
    # Subtract eps1 before exponentiating so kT -> 0 stays finite.
    w = np.array([1.0, math.exp(-(h.eps2 - h.eps1) / kT)])
    w /= w.sum()
    return DensityMatrix(np.diag(w).astype(complex), 1, _skip_checks=True)


def pure_state(theta: float, phi: float) -> DensityMatrix:
    """Rank-1 projector onto cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    _check_angles(theta, phi)
    v = np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(1j * phi)])
    return DensityMatrix(np.outer(v, v.conj()), 1, _skip_checks=True)


def dephased_state(theta: float) -> DensityMatrix:
    """Diagonal state with the populations of pure_state(theta, .).

    Covers population inversion (theta > pi/2) without solving for an
    effective negative temperature.
    """
    _check_angles(theta, 0.0)
    c2 = math.cos(theta / 2) ** 2
    return DensityMatrix(np.diag([c2, 1.0 - c2]).astype(complex), 1, _skip_checks=True)


def qubit_b_state(cfg: InitConfig, h: QubitHamiltonian) -> DensityMatrix:
    if cfg.b_mode == "pure":
        return pure_state(cfg.theta, cfg.phi)
    if cfg.b_mode == "dephased":
        return dephased_state(cfg.theta)
    return gibbs_state(h, cfg.kT_b)


def initial_system_state(cfg: InitConfig, h: QubitHamiltonian | None = None) -> DensityMatrix:
    """Uncorrelated product state rho_A (x) rho_B [(x) rho_C]."""
    h = h or QubitHamiltonian()
    rho_a = gibbs_state(h, cfg.kT).mat
    rho_b = qubit_b_state(cfg, h).mat
    if cfg.n_qubits == 2:
        joint = kron(rho_a, rho_b)
    else:
        joint = kron(rho_a, rho_b, rho_a)
    return DensityMatrix(joint, cfg.n_qubits, _skip_checks=True)


def build_system_hamiltonian(h: QubitHamiltonian, n_qubits: int) -> np.ndarray:
    """Non-interacting sum of local terms on the joint space (diagonal)."""
    if n_qubits not in (2, 3):
        raise ValueError("system size must be 2 or 3 qubits")
    local = np.array([h.eps1, h.eps2])
    diag = np.zeros(2**n_qubits)
    for q in range(n_qubits):
        term = np.ones(1)
        for r in range(n_qubits):
            term = np.kron(term, local if r == q else np.ones(2))
        diag += term
    return np.diag(diag).astype(complex)


def hamiltonian_diagonal(h: QubitHamiltonian, n_qubits: int) -> np.ndarray:
    """Real diagonal of build_system_hamiltonian, as a vector."""
    return np.real(np.diag(build_system_hamiltonian(h, n_qubits)))
