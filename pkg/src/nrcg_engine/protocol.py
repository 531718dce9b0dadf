"""Nth-root controlled-NOT gates, circuit assembly, iterative evolution.

A gate with root order N applies the CNOT mixing block
``(1 + e^{i pi/N})/2`` / ``(1 - e^{i pi/N})/2`` so that N consecutive
applications reproduce a full CNOT.  Circuits come in two flavours:

- case 1: qubit A is never a target;
- case 2: every qubit is a control or a target within one iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .linalg import DensityMatrix, evolve, is_unitary
from .states import InitConfig

DEFAULT_ROOT = 15
DEFAULT_ITERATIONS = {2: 60, 3: 150}

QUBIT_NAMES = "ABC"


def _mixing_entries(n_root: int):
    if n_root < 1:
        raise ValueError("root order must be a positive integer")
    # exact -1 keeps the N=1 gate an exact CNOT (no exp() rounding)
    e = -1.0 + 0.0j if n_root == 1 else np.exp(1j * np.pi / n_root)
    return 0.5 + 0.5 * e, 0.5 - 0.5 * e


def nrcg_matrix(n_root: int, direction: str = "A_controls_B") -> np.ndarray:
    """4x4 fractional CNOT on two qubits (first factor most significant).

    ``direction`` selects which qubit controls: "A_controls_B" mixes the
    target when the first qubit is excited, "B_controls_A" when the second
    one is.
    """
    s, p = _mixing_entries(n_root)
    m = np.eye(4, dtype=complex)
    if direction == "A_controls_B":
        m[2, 2] = m[3, 3] = s
        m[2, 3] = m[3, 2] = p
    elif direction == "B_controls_A":
        m[1, 1] = m[3, 3] = s
        m[1, 3] = m[3, 1] = p
    else:
        raise ValueError("unknown direction %r" % direction)
    return m


@dataclass(frozen=True)
class NrcgGate:
    """Fractional CNOT between two named qubits of the register."""

    n_root: int
    control: int
    target: int

    def __post_init__(self):
        if self.n_root < 1:
            raise ValueError("root order must be a positive integer")
        if self.control == self.target:
            raise ValueError("control and target must differ")

    def label(self) -> str:
        return "%s>%s" % (QUBIT_NAMES[self.control], QUBIT_NAMES[self.target])


def embed_gate(g: NrcgGate, n_qubits: int) -> np.ndarray:
    """Lift a two-qubit gate to the full register (qubit 0 most significant)."""
    if g.control >= n_qubits or g.target >= n_qubits:
        raise ValueError("gate indices exceed register size")
    s, p = _mixing_entries(g.n_root)
    dim = 2**n_qubits
    u = np.zeros((dim, dim), dtype=complex)
    cbit = n_qubits - 1 - g.control
    tbit = n_qubits - 1 - g.target
    for i in range(dim):
        if (i >> cbit) & 1 == 0:
            u[i, i] = 1.0
        else:
            u[i, i] = s
            u[i, i ^ (1 << tbit)] = p
    return u


_DEFAULT_SEQUENCES = {
    (1, 2): ((0, 1),),
    (2, 2): ((0, 1), (1, 0)),
    (1, 3): ((0, 1), (1, 2)),
    (2, 3): ((0, 1), (1, 0), (1, 2), (2, 1)),
}


def default_gate_sequence(case_id: int, n_qubits: int, n_root: int) -> tuple:
    key = (case_id, n_qubits)
    if key not in _DEFAULT_SEQUENCES:
        raise ValueError("case must be 1 or 2 on a 2- or 3-qubit register")
    return tuple(NrcgGate(n_root, c, t) for c, t in _DEFAULT_SEQUENCES[key])


def validate_sequence(case_id: int, n_qubits: int, gates) -> None:
    """Check the textual circuit constraints for the given case."""
    gates = tuple(gates)
    if any(g.control >= n_qubits or g.target >= n_qubits for g in gates):
        raise ValueError("gate indices exceed register size")
    if case_id == 1:
        if any(g.target == 0 for g in gates):
            raise ValueError("case 1 forbids qubit A as a target")
    elif case_id == 2:
        touched = set()
        for g in gates:
            touched.add(g.control)
            touched.add(g.target)
        if touched != set(range(n_qubits)):
            raise ValueError("case 2 requires every qubit to appear in the circuit")
        expected = 2 * len(_DEFAULT_SEQUENCES[(1, n_qubits)])
        if len(gates) != expected:
            raise ValueError("case 2 on %d qubits uses %d gates" % (n_qubits, expected))
    else:
        raise ValueError("case must be 1 or 2")


@dataclass(frozen=True)
class ProtocolSpec:
    """Which circuit to run: case, register size, root order, gate list."""

    case_id: int
    n_qubits: int
    n_root: int = DEFAULT_ROOT
    gate_sequence: tuple = None
    allow_custom: bool = False

    def __post_init__(self):
        if self.case_id not in (1, 2):
            raise ValueError("case must be 1 or 2")
        if self.n_qubits not in (2, 3):
            raise ValueError("system size must be 2 or 3 qubits")
        if self.n_root < 1:
            raise ValueError("root order must be a positive integer")
        if self.gate_sequence is None:
            seq = default_gate_sequence(self.case_id, self.n_qubits, self.n_root)
            object.__setattr__(self, "gate_sequence", seq)
        else:
            seq = tuple(self.gate_sequence)
            object.__setattr__(self, "gate_sequence", seq)
            if not self.allow_custom:
                validate_sequence(self.case_id, self.n_qubits, seq)

    @property
    def default_iterations(self) -> int:
        return DEFAULT_ITERATIONS[self.n_qubits]

    def with_root(self, n_root: int) -> "ProtocolSpec":
        seq = tuple(NrcgGate(n_root, g.control, g.target) for g in self.gate_sequence)
        return ProtocolSpec(self.case_id, self.n_qubits, n_root, seq, self.allow_custom)

    def _key(self):
        return (self.case_id, self.n_qubits, self.n_root, self.gate_sequence)


def circuit_for(spec: ProtocolSpec) -> list:
    """Embedded unitaries for one iteration, in application order."""
    return [embed_gate(g, spec.n_qubits) for g in spec.gate_sequence]


@lru_cache(maxsize=None)
def _composed_unitary(key) -> np.ndarray:
    case_id, n_qubits, n_root, gates = key
    u = np.eye(2**n_qubits, dtype=complex)
    for g in gates:
        u = embed_gate(g, n_qubits) @ u
    u.setflags(write=False)
    return u


def iteration_unitary(spec: ProtocolSpec) -> np.ndarray:
    """Product of the gate list, cached per protocol."""
    return _composed_unitary(spec._key())


@dataclass(frozen=True)
class StateTrace:
    """States along an iterated protocol; states[0] is the initial state."""

    states: tuple
    spec: ProtocolSpec
    init: InitConfig = None

    @property
    def iterations(self) -> int:
        return len(self.states) - 1


def run_trace(init: DensityMatrix, spec: ProtocolSpec, iterations: int,
              init_config: InitConfig = None) -> StateTrace:
    """Apply the circuit ``iterations`` times, recording every state."""
    if iterations < 0:
        raise ValueError("iteration count must be nonnegative")
    if init.n_qubits != spec.n_qubits:
        raise ValueError("initial state size does not match the protocol")
    u = iteration_unitary(spec)
    if not is_unitary(u):
        raise ValueError("composed iteration operator lost unitarity")
    states = [init]
    rho = init
    for _ in range(iterations):
        rho = evolve(rho, u)
        states.append(rho)
    return StateTrace(tuple(states), spec, init_config)
