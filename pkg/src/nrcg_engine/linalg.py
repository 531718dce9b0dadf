"""Dense complex linear algebra for few-qubit density matrices.

Everything here works on plain ``numpy.ndarray`` complex matrices of
dimension at most 8 (three qubits).  ``DensityMatrix`` is the single
validated wrapper type shared by all physics layers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Absolute tolerance for entrywise matrix comparisons.
ATOL = 1e-12
# Tolerance for structural checks (Hermiticity, unitarity, unit trace).
STRUCT_TOL = 1e-10
# Eigenvalues in [-EIG_CLAMP_TOL, 0) are treated as numerical zero;
# anything below -EIG_ERROR_TOL is a genuinely invalid state.
EIG_CLAMP_TOL = 1e-10
EIG_ERROR_TOL = 1e-8


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def kron(*matrices: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not matrices:
        raise ValueError("kron needs at least one matrix")
    out = np.asarray(matrices[0], dtype=complex)
    for m in matrices[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def is_hermitian(m: np.ndarray, tol: float = STRUCT_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_unitary(m: np.ndarray, tol: float = STRUCT_TOL) -> bool:
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def hermitian_eigenvalues(m: np.ndarray, tol: float = STRUCT_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending.

    Raises ValueError if the input is not Hermitian within ``tol``.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance %g" % tol)
    return np.linalg.eigvalsh(m)


def hermitian_eigh(m: np.ndarray, tol: float = STRUCT_TOL):
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance %g" % tol)
    return np.linalg.eigh(m)


def clamped_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Eigenvalues with small negative noise clamped to zero.

    Values in [-EIG_CLAMP_TOL, 0) become 0; below -EIG_ERROR_TOL raises.
    """
    ev = hermitian_eigenvalues(m)
    if ev[0] < -EIG_ERROR_TOL:
        raise ValueError("matrix has eigenvalue %g below -%g" % (ev[0], EIG_ERROR_TOL))
    return np.clip(ev, 0.0, None)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated quantum state: Hermitian, unit trace, positive semidefinite."""

    mat: np.ndarray
    n_qubits: int
    _skip_checks: bool = field(default=False, repr=False)

    def __post_init__(self):
        mat = np.ascontiguousarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("density matrix must be square")
        if mat.shape[0] != 2**self.n_qubits:
            raise ValueError(
                "dimension %d does not match %d qubits" % (mat.shape[0], self.n_qubits)
            )
        if not self._skip_checks:
            self.validate()

    def validate(self):
        if not is_hermitian(self.mat):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(self.mat)
        if abs(tr - 1.0) > STRUCT_TOL:
            raise ValueError("density matrix trace %s != 1" % tr)
        ev = np.linalg.eigvalsh(self.mat)
        if ev[0] < -EIG_CLAMP_TOL:
            raise ValueError("density matrix has negative eigenvalue %g" % ev[0])

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def reduced(self, keep) -> "DensityMatrix":
        out = partial_trace(self.mat, self.n_qubits, keep)
        return DensityMatrix(out, len(tuple(keep)), _skip_checks=True)


def partial_trace(rho: np.ndarray, n_qubits: int, keep) -> np.ndarray:
    """Trace out all qubits not in ``keep``.

    Qubit 0 (A) is the most significant tensor factor.  ``keep`` preserves
    the natural qubit order regardless of the order given.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2**n_qubits, 2**n_qubits):
        raise ValueError("state dimension does not match qubit count")
    keep = sorted(set(int(q) for q in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if any(q < 0 or q >= n_qubits for q in keep):
        raise ValueError("keep indices out of range")
    t = rho.reshape((2,) * (2 * n_qubits))
    remaining = list(range(n_qubits))
    for q in reversed([q for q in range(n_qubits) if q not in keep]):
        pos = remaining.index(q)
        half = len(remaining)
        t = np.trace(t, axis1=pos, axis2=pos + half)
        remaining.pop(pos)
    d = 2 ** len(keep)
    return np.ascontiguousarray(t.reshape(d, d))


def permute_qubits(rho: np.ndarray, n_qubits: int, order) -> np.ndarray:
    """Reorder tensor factors so new qubit i is old qubit ``order[i]``."""
    order = list(order)
    if sorted(order) != list(range(n_qubits)):
        raise ValueError("order must be a permutation of qubit indices")
    t = rho.reshape((2,) * (2 * n_qubits))
    axes = order + [q + n_qubits for q in order]
    d = 2**n_qubits
    return np.ascontiguousarray(t.transpose(axes).reshape(d, d))


def evolve(rho, u: np.ndarray, tol: float = STRUCT_TOL):
    """Conjugate a state by a unitary: u rho u^dagger.

    Accepts a DensityMatrix (returning one) or a bare matrix.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise ValueError("evolution operator is not unitary within tolerance")
    if isinstance(rho, DensityMatrix):
        if rho.dim != u.shape[0]:
            raise ValueError("state and unitary dimensions differ")
        out = u @ rho.mat @ u.conj().T
        return DensityMatrix(out, rho.n_qubits, _skip_checks=True)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[0] != u.shape[0]:
        raise ValueError("state and unitary dimensions differ")
    return u @ rho @ u.conj().T
