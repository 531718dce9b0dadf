"""Information-theoretic measures on bipartitions of the working medium.

Entropic quantities (entropy, mutual information, discord, classical
correlations) use natural log; entanglement of formation uses log2.
Discord and classical correlations are directional: the measurement acts
on the second part of the bipartition.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .linalg import DensityMatrix, clamped_eigenvalues, partial_trace, permute_qubits

log = logging.getLogger(__name__)

# Stage-1 grid steps for the discord minimization; the 2-qubit measurement
# grid is coarser because it is four-dimensional.
GRID_STEP_1Q = math.pi / 16
GRID_STEP_2Q = math.pi / 8
REFINE_STOP = 1e-4

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_SYSY = np.kron(_SIGMA_Y, _SIGMA_Y)


@dataclass(frozen=True)
class Bipartition:
    """Ordered split (X : Y) of the qubit set; measurements act on Y."""

    part_x: tuple
    part_y: tuple

    def __post_init__(self):
        x = tuple(int(q) for q in self.part_x)
        y = tuple(int(q) for q in self.part_y)
        object.__setattr__(self, "part_x", x)
        object.__setattr__(self, "part_y", y)
        if not x or not y:
            raise ValueError("both parts must be nonempty")
        if set(x) & set(y):
            raise ValueError("parts must be disjoint")

    def check(self, n_qubits: int):
        if set(self.part_x) | set(self.part_y) != set(range(n_qubits)):
            raise ValueError("bipartition must cover all qubits")

    def swapped(self) -> "Bipartition":
        return Bipartition(self.part_y, self.part_x)

    def label(self, names: str = "ABC") -> str:
        return "%s:%s" % (
            "".join(names[q] for q in self.part_x),
            "".join(names[q] for q in self.part_y),
        )


@dataclass(frozen=True)
class MeasurementBasis:
    """Angles of a 1-qubit (theta, phi) or 2-qubit (theta, phi, theta',
    phi') projective measurement basis."""

    angles: tuple

    def __post_init__(self):
        angles = tuple(float(a) for a in self.angles)
        object.__setattr__(self, "angles", angles)
        if len(angles) not in (2, 4):
            raise ValueError("expected 2 or 4 angles")

    def vectors(self):
        """Orthonormal single-qubit pairs {u, v} (one per measured qubit)."""
        pairs = []
        for i in range(0, len(self.angles), 2):
            theta, phi = self.angles[i], self.angles[i + 1]
            c, s = math.cos(theta / 2), math.sin(theta / 2)
            u = np.array([c, s * np.exp(1j * phi)])
            v = np.array([s * np.exp(-1j * phi), -c])
            pairs.append((u, v))
        return pairs


def von_neumann_entropy(rho) -> float:
    """-Tr[rho ln rho] over clamped eigenvalues (0 ln 0 := 0)."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    ev = clamped_eigenvalues(mat)
    ev = ev[ev > 1e-14]
    return float(-(ev * np.log(ev)).sum())


def _as_parts(rho, bp: Bipartition):
    if not isinstance(rho, DensityMatrix):
        raise TypeError("expected a DensityMatrix")
    bp.check(rho.n_qubits)
    return rho.mat, rho.n_qubits


def mutual_information(rho: DensityMatrix, bp: Bipartition) -> float:
    """S(X) + S(Y) - S(XY); symmetric in the partition pair."""
    mat, n = _as_parts(rho, bp)
    s_x = von_neumann_entropy(partial_trace(mat, n, bp.part_x))
    s_y = von_neumann_entropy(partial_trace(mat, n, bp.part_y))
    return s_x + s_y - von_neumann_entropy(mat)


def _measured_last(rho: DensityMatrix, bp: Bipartition) -> np.ndarray:
    """Reorder tensor factors: kept part first, measured part last."""
    order = list(bp.part_x) + list(bp.part_y)
    if order == list(range(rho.n_qubits)):
        return rho.mat
    return permute_qubits(rho.mat, rho.n_qubits, order)


def _cond_entropy_angles(rho_perm: np.ndarray, d_keep: int, n_meas: int, angles) -> float:
    if n_meas == 1:
        return float(_kernels.cond_entropy_meas1(rho_perm, d_keep, angles[0], angles[1]))
    # 2-qubit measurement: kernel expects A kept in front, B measured pair
    # behind, which _measured_last provides as (kept, meas1, meas2).
    # cond_entropy_meas2 assumes the kept qubit first.
    return float(
        _kernels.cond_entropy_meas2(rho_perm, angles[0], angles[1], angles[2], angles[3])
    )


def conditional_entropy(rho: DensityMatrix, bp: Bipartition, basis: MeasurementBasis) -> float:
    """Average post-measurement entropy of X after measuring Y in ``basis``."""
    mat, n = _as_parts(rho, bp)
    n_meas = len(bp.part_y)
    if n_meas not in (1, 2):
        raise ValueError("measured part must hold 1 or 2 qubits")
    if len(basis.angles) != 2 * n_meas:
        raise ValueError("basis angle count does not match measured part")
    rho_perm = _measured_last(rho, bp)
    d_keep = 2 ** len(bp.part_x)
    # probability bookkeeping sanity check via the measured marginal
    probs = _outcome_probabilities(rho_perm, d_keep, basis)
    if abs(sum(probs) - 1.0) > 1e-10:
        raise RuntimeError("measurement outcome probabilities sum to %g" % sum(probs))
    return _cond_entropy_angles(rho_perm, d_keep, n_meas, basis.angles)


def _outcome_probabilities(rho_perm: np.ndarray, d_keep: int, basis: MeasurementBasis):
    n_total = int(round(math.log2(rho_perm.shape[0])))
    n_keep = int(round(math.log2(d_keep)))
    rho_y = partial_trace(rho_perm, n_total, range(n_keep, n_total))
    probs = []
    pairs = basis.vectors()
    if len(pairs) == 1:
        for w in pairs[0]:
            probs.append(float(np.real(w.conj() @ rho_y @ w)))
    else:
        for w1 in pairs[0]:
            for w2 in pairs[1]:
                w = np.kron(w1, w2)
                probs.append(float(np.real(w.conj() @ rho_y @ w)))
    return probs


def _stage1_grid(step: float):
    n_theta = int(round(math.pi / step)) + 1
    n_phi = int(round(2 * math.pi / step)) + 1
    return np.linspace(0.0, math.pi, n_theta), np.linspace(0.0, 2 * math.pi, n_phi)


def _refine(eval_point, angles, step: float):
    """Coordinate descent with step halving from a grid optimum."""
    angles = list(angles)
    best = eval_point(angles)
    while step >= REFINE_STOP:
        improved = False
        for i in range(len(angles)):
            for delta in (step, -step):
                trial = list(angles)
                trial[i] += delta
                val = eval_point(trial)
                if val < best - 1e-15:
                    best = val
                    angles = trial
                    improved = True
        if not improved:
            step *= 0.5
    return best, tuple(angles)


def min_conditional_entropy(rho: DensityMatrix, bp: Bipartition, grid_step: float = None):
    """Two-stage minimum of the conditional entropy over measurement bases."""
    mat, n = _as_parts(rho, bp)
    n_meas = len(bp.part_y)
    if n_meas not in (1, 2):
        raise ValueError("measured part must hold 1 or 2 qubits")
    rho_perm = _measured_last(rho, bp)
    d_keep = 2 ** len(bp.part_x)
    if n_meas == 1:
        step = grid_step or GRID_STEP_1Q
        thetas, phis = _stage1_grid(step)
        _, bt, bp_ = _kernels.min_cond_entropy_meas1(rho_perm, d_keep, thetas, phis)
        start = (bt, bp_)
    else:
        step = grid_step or GRID_STEP_2Q
        thetas, phis = _stage1_grid(step)
        _, arr = _kernels.min_cond_entropy_meas2(rho_perm, thetas, phis)
        start = tuple(arr)

    def eval_point(angles):
        return _cond_entropy_angles(rho_perm, d_keep, n_meas, angles)

    return _refine(eval_point, start, step)


def quantum_discord(rho: DensityMatrix, bp: Bipartition, grid_step: float = None) -> float:
    """min over bases of S(Y) - S(XY) + S(X | measurement on Y), clamped at 0."""
    mat, n = _as_parts(rho, bp)
    s_y = von_neumann_entropy(partial_trace(mat, n, bp.part_y))
    s_xy = von_neumann_entropy(mat)
    cond, _ = min_conditional_entropy(rho, bp, grid_step)
    d = s_y - s_xy + cond
    if d < 0.0:
        if d < -1e-8:
            log.warning("discord clamped from %g to 0", d)
        d = 0.0
    return d


def classical_correlations(rho: DensityMatrix, bp: Bipartition, grid_step: float = None) -> float:
    """Mutual information minus discord, clamped at 0."""
    cc = mutual_information(rho, bp) - quantum_discord(rho, bp, grid_step)
    return max(cc, 0.0)


def concurrence_eof(rho: DensityMatrix):
    """Concurrence and entanglement of formation (bits) of a 2-qubit state.

    Uses the spin-flipped product rho (sy x sy) rho* (sy x sy); its
    eigenvalue square roots, sorted descending, give the concurrence.
    """
    if rho.n_qubits != 2:
        raise ValueError("concurrence is defined for exactly 2 qubits")
    mat = rho.mat
    flipped = _SYSY @ mat.conj() @ _SYSY
    ev = np.linalg.eigvals(mat @ flipped)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]
    concurrence = max(lam[0] - lam[1] - lam[2] - lam[3], 0.0)
    tau = concurrence**2
    x = (1.0 - math.sqrt(max(1.0 - tau, 0.0))) / 2.0
    eof = 0.0
    for p in (x, 1.0 - x):
        if p > 1e-15:
            eof -= p * math.log2(p)
    return float(concurrence), float(eof)


def pearson(x, y) -> float:
    """Pearson correlation coefficient of two equal-length series."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("need two equal-length series of at least 2 points")
    xm = x - x.mean()
    ym = y - y.mean()
    denom = math.sqrt(float((xm**2).sum()) * float((ym**2).sum()))
    if denom == 0.0:
        raise ValueError("correlation undefined for a constant series")
    r = float((xm * ym).sum() / denom)
    return max(-1.0, min(1.0, r))
