"""Density-matrix simulator for few-qubit heat engines driven by
fractional (Nth-root) controlled-NOT gate circuits.

The package is organised in thin layers:

``linalg``        dense complex linear algebra on 2-8 dimensional matrices
``states``        Hamiltonians, Gibbs / pure / dephased initial states
``protocol``      Nth-root CNOT gates, circuit assembly, iterative evolution
``thermo``        internal energies, work, heat-engine regime, efficiency
``correlations``  entropy, mutual information, discord, concurrence, PCC
``sweeps``        parameter scans and report generation
``cli``           command-line front end

Hot numeric loops live in ``_kernels`` and are JIT-compiled with numba by
default; set ``NRCG_ENGINE_DISABLE_NUMBA=1`` to force the pure-numpy path.
"""

from .linalg import DensityMatrix, kron, partial_trace, hermitian_eigenvalues, evolve
from .states import (
    QubitHamiltonian,
    InitConfig,
    gibbs_state,
    pure_state,
    dephased_state,
    initial_system_state,
    build_system_hamiltonian,
)
from .protocol import NrcgGate, ProtocolSpec, StateTrace, nrcg_matrix, embed_gate, circuit_for, run_trace
from .thermo import EnergyRecord, internal_energy, delta_u, classify_regime, efficiency
from .correlations import (
    Bipartition,
    von_neumann_entropy,
    mutual_information,
    conditional_entropy,
    quantum_discord,
    classical_correlations,
    concurrence_eof,
    pearson,
)

__version__ = "0.1.0"
