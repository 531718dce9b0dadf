"""Thermodynamic accounting along a state trace.

Internal energy is Tr[rho H]; a drop in total energy counts as positive
extractable work.  Heat-engine operation requires the cold qubits to gain
energy, the hot qubit (B) to lose it, and the system to lose energy overall.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, is_hermitian, partial_trace
from .states import QubitHamiltonian
from .protocol import StateTrace

HEAT_ENGINE = "heat_engine"
OTHER = "other"

# Case 1 keeps dU_A at exactly zero; a strict > 0 test would misclassify
# rounding noise, so inequalities carry this slack.
REGIME_TOL = 1e-12


@dataclass(frozen=True)
class EnergyRecord:
    """Per-iteration energy bookkeeping relative to iteration 0."""

    iteration: int
    u_sys: float
    u_per_qubit: tuple
    du_sys: float
    du_per_qubit: tuple
    work: float
    regime: str
    efficiency: float | None


def internal_energy(rho, h: np.ndarray) -> float:
    """Tr[rho H] as a real scalar."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if mat.shape != h.shape:
        raise ValueError("state and Hamiltonian dimensions differ")
    if not is_hermitian(h):
        raise ValueError("Hamiltonian must be Hermitian")
    val = np.trace(mat @ h)
    if abs(val.imag) > 1e-10:
        raise ValueError("internal energy has imaginary residue %g" % val.imag)
    return float(val.real)


def hot_qubit_index(u0_per_qubit, tol: float = 1e-12) -> int | None:
    """Index of qubit B if it starts strictly hotter than A, else None.

    The engine conditions are written for a hot qubit B only; a tie (or a
    cold B) yields no hot component and efficiency is suppressed.
    """
    if u0_per_qubit[1] > u0_per_qubit[0] + tol:
        return 1
    return None


def classify_regime(du_per_qubit, du_sys: float, hot_qubit: int | None) -> str:
    """Heat-engine test: cold qubits gain, hot qubit loses, system loses."""
    if hot_qubit is None:
        return OTHER
    for q, du in enumerate(du_per_qubit):
        if q == hot_qubit:
            if not du < -REGIME_TOL:
                return OTHER
        else:
            if not du >= -REGIME_TOL:
                return OTHER
    if not du_sys < -REGIME_TOL:
        return OTHER
    return HEAT_ENGINE


def efficiency(work: float, du_hot: float, regime: str) -> float:
    """Work over heat released by the hot component, -W / dU_hot."""
    if regime != HEAT_ENGINE:
        raise RuntimeError("efficiency is defined only in the heat-engine regime")
    if du_hot == 0.0:
        raise ZeroDivisionError("hot component exchanged no heat")
    return -work / du_hot


def _record(iteration, u_sys, u_q, u_sys0, u_q0, hot):
    du_q = tuple(u - u0 for u, u0 in zip(u_q, u_q0))
    du_sys = u_sys - u_sys0
    work = -du_sys
    regime = classify_regime(du_q, du_sys, hot)
    eta = efficiency(work, du_q[hot], regime) if regime == HEAT_ENGINE else None
    return EnergyRecord(iteration, u_sys, tuple(u_q), du_sys, du_q, work, regime, eta)


def delta_u(trace: StateTrace, h_sys: np.ndarray, h_local: QubitHamiltonian) -> list:
    """One EnergyRecord per trace entry, deltas taken against iteration 0."""
    n = trace.spec.n_qubits
    h1 = h_local.matrix
    records = []
    u_q0 = None
    u_sys0 = None
    hot = None
    for k, state in enumerate(trace.states):
        u_sys = internal_energy(state, h_sys)
        u_q = [
            internal_energy(partial_trace(state.mat, n, [q]), h1) for q in range(n)
        ]
        if k == 0:
            u_q0, u_sys0 = u_q, u_sys
            hot = hot_qubit_index(u_q0)
        records.append(_record(k, u_sys, u_q, u_sys0, u_q0, hot))
    return records
