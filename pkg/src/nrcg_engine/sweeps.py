"""Parameter scans, trace reports, and PCC tables.

All entry points are deterministic: rerunning with the same config produces
bit-identical output.  Grid cells are evaluated by the compiled kernel in
``_kernels``; with ``--jobs`` > 1 the theta rows are split across a process
pool and gathered back in grid order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .correlations import (
    Bipartition,
    concurrence_eof,
    mutual_information,
    pearson,
    quantum_discord,
)
from .protocol import ProtocolSpec, StateTrace, iteration_unitary, run_trace
from .states import InitConfig, QubitHamiltonian, gibbs_state, initial_system_state
from .thermo import HEAT_ENGINE, classify_regime, delta_u, hot_qubit_index

DEFAULT_KT = 40.0


class ConfigError(ValueError):
    """Invalid sweep configuration (CLI exit code 2)."""


class ConsistencyError(RuntimeError):
    """Numerical invariant breached mid-run (CLI exit code 3)."""


@dataclass(frozen=True)
class GridAxis:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 1 or self.stop < self.start:
            raise ConfigError("grid axis needs count >= 1 and stop >= start")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


THETA_DEFAULT = GridAxis(0.0, math.pi, 101)
PHI_DEFAULT = GridAxis(0.0, 2 * math.pi, 201)


@dataclass(frozen=True)
class SweepConfig:
    """Resolved parameters for one sweep or trace command."""

    case_id: int = 1
    n_qubits: int = 2
    n_root: int = 15
    kT: tuple = (DEFAULT_KT,)
    theta_grid: GridAxis = THETA_DEFAULT
    phi_grid: GridAxis = PHI_DEFAULT
    iterations: int | None = None
    b_mode: str = "pure"
    theta: float | None = None
    phi: float | None = None
    with_correlations: bool = False
    jobs: int = 1
    gate_sequence: tuple | None = None
    allow_custom: bool = False

    def __post_init__(self):
        if self.case_id not in (1, 2):
            raise ConfigError("case must be 1 or 2")
        if self.n_qubits not in (2, 3):
            raise ConfigError("qubits must be 2 or 3")
        if self.n_root < 1:
            raise ConfigError("root order must be >= 1")
        if not self.kT or any(t <= 0 for t in self.kT):
            raise ConfigError("kT values must be positive")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.b_mode not in ("pure", "dephased"):
            raise ConfigError("qubit-B mode must be pure or dephased")
        try:
            self.spec
        except ValueError as exc:
            raise ConfigError(str(exc))

    @property
    def spec(self) -> ProtocolSpec:
        return ProtocolSpec(
            self.case_id,
            self.n_qubits,
            self.n_root,
            self.gate_sequence,
            self.allow_custom,
        )

    @property
    def m_iterations(self) -> int:
        if self.iterations is not None:
            return self.iterations
        return self.spec.default_iterations

    def meta(self) -> dict:
        return {
            "case": self.case_id,
            "qubits": self.n_qubits,
            "root": self.n_root,
            "kT": list(self.kT),
            "theta_grid": [self.theta_grid.start, self.theta_grid.stop, self.theta_grid.count],
            "phi_grid": [self.phi_grid.start, self.phi_grid.stop, self.phi_grid.count],
            "iterations": self.m_iterations,
            "qubitB_mode": self.b_mode,
            "theta": self.theta,
            "phi": self.phi,
            "correlations": self.with_correlations,
            "jobs": self.jobs,
            "gate_sequence": [g.label() for g in self.spec.gate_sequence],
        }


@dataclass(frozen=True)
class GridCell:
    theta: float
    phi: float
    max_work: float
    argmax_iteration: int
    regime_at_max: str


@dataclass(frozen=True)
class GridScanResult:
    thetas: np.ndarray
    phis: np.ndarray
    max_work: np.ndarray
    argmax_iter: np.ndarray
    regime: np.ndarray
    config: SweepConfig = field(repr=False, default=None)

    def best(self):
        """Global maximum cell: (work, theta, phi, iteration)."""
        it, ip = np.unravel_index(np.argmax(self.max_work), self.max_work.shape)
        return (
            float(self.max_work[it, ip]),
            float(self.thetas[it]),
            float(self.phis[ip]),
            int(self.argmax_iter[it, ip]),
        )

    def cells(self):
        for it, theta in enumerate(self.thetas):
            for ip, phi in enumerate(self.phis):
                yield GridCell(
                    float(theta),
                    float(phi),
                    float(self.max_work[it, ip]),
                    int(self.argmax_iter[it, ip]),
                    HEAT_ENGINE if self.regime[it, ip] else "other",
                )


def _qubit_weights(h: QubitHamiltonian, n_qubits: int) -> np.ndarray:
    dim = 2**n_qubits
    w = np.empty((n_qubits, dim))
    for q in range(n_qubits):
        bit = n_qubits - 1 - q
        for i in range(dim):
            w[q, i] = h.eps2 if (i >> bit) & 1 else h.eps1
    return w


def _scan_chunk(args):
    u, rho_a, thetas, phis, m, n_qubits, qweights, coherent = args
    return _kernels.scan_grid(u, rho_a, thetas, phis, m, n_qubits, qweights, coherent)


def _run_grid(cfg: SweepConfig, kT: float, h: QubitHamiltonian) -> GridScanResult:
    spec = cfg.spec
    u = np.ascontiguousarray(iteration_unitary(spec))
    rho_a = gibbs_state(h, kT).mat
    thetas = cfg.theta_grid.values()
    phis = cfg.phi_grid.values()
    qweights = _qubit_weights(h, cfg.n_qubits)
    coherent = cfg.b_mode == "pure"
    m = cfg.m_iterations

    if cfg.jobs > 1 and len(thetas) > 1:
        chunks = np.array_split(np.arange(len(thetas)), min(cfg.jobs, len(thetas)))
        payloads = [
            (u, rho_a, thetas[idx], phis, m, cfg.n_qubits, qweights, coherent)
            for idx in chunks
        ]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            parts = list(pool.map(_scan_chunk, payloads))
        max_work = np.concatenate([p[0] for p in parts], axis=0)
        argmax_iter = np.concatenate([p[1] for p in parts], axis=0)
        du_at_max = np.concatenate([p[2] for p in parts], axis=0)
    else:
        max_work, argmax_iter, du_at_max = _kernels.scan_grid(
            u, rho_a, thetas, phis, m, cfg.n_qubits, qweights, coherent
        )

    u_a0 = float(np.real(np.trace(rho_a @ h.matrix)))
    regime = np.zeros(max_work.shape, dtype=bool)
    for it, theta in enumerate(thetas):
        u_b0 = h.eps1 * math.cos(theta / 2) ** 2 + h.eps2 * math.sin(theta / 2) ** 2
        hot = hot_qubit_index([u_a0, u_b0])
        if hot is None:
            continue
        for ip in range(len(phis)):
            du_q = tuple(du_at_max[it, ip])
            regime[it, ip] = (
                classify_regime(du_q, -max_work[it, ip], hot) == HEAT_ENGINE
            )
    return GridScanResult(thetas, phis, max_work, argmax_iter, regime, cfg)


def grid_scan(cfg: SweepConfig, h: QubitHamiltonian = None) -> GridScanResult:
    """Max-work map over the theta-phi grid at a single temperature."""
    h = h or QubitHamiltonian()
    if len(cfg.kT) != 1:
        raise ConfigError("grid-scan expects a single kT value")
    return _run_grid(cfg, cfg.kT[0], h)


def temp_scan(cfg: SweepConfig, h: QubitHamiltonian = None):
    """Global max work per temperature, each over the full theta-phi grid."""
    h = h or QubitHamiltonian()
    if len(cfg.kT) < 2:
        raise ConfigError("temp-scan needs a kT grid with more than one value")
    rows = []
    for kT in cfg.kT:
        res = _run_grid(cfg, kT, h)
        work, theta, phi, k = res.best()
        rows.append({"kT": kT, "max_work": work, "theta": theta, "phi": phi, "iteration": k})
    return rows


@dataclass(frozen=True)
class BaselineReport:
    thermal: GridScanResult
    pure: GridScanResult

    @property
    def thermal_max(self) -> float:
        return self.thermal.best()[0]

    @property
    def pure_max(self) -> float:
        return self.pure.best()[0]

    @property
    def relative_change_percent(self) -> float:
        return 100.0 * (self.pure_max - self.thermal_max) / self.thermal_max


def thermal_baseline_scan(cfg: SweepConfig, h: QubitHamiltonian = None) -> BaselineReport:
    """Dephased (no-coherence) scan plus the pure-state scan it is compared to."""
    h = h or QubitHamiltonian()
    thermal_cfg = replace(cfg, b_mode="dephased")
    pure_cfg = replace(cfg, b_mode="pure")
    return BaselineReport(grid_scan(thermal_cfg, h), grid_scan(pure_cfg, h))


def _build_trace(cfg: SweepConfig, h: QubitHamiltonian, n_root: int = None,
                 iterations: int = None) -> StateTrace:
    if cfg.theta is None:
        raise ConfigError("this command needs an explicit theta")
    phi = cfg.phi if cfg.phi is not None else 0.0
    init_cfg = InitConfig(
        kT=cfg.kT[0],
        n_qubits=cfg.n_qubits,
        b_mode=cfg.b_mode,
        theta=cfg.theta,
        phi=phi,
    )
    spec = cfg.spec if n_root is None else cfg.spec.with_root(n_root)
    init = initial_system_state(init_cfg, h)
    m = iterations if iterations is not None else cfg.m_iterations
    return run_trace(init, spec, m, init_cfg)


def _validate_trace(trace: StateTrace):
    p0 = trace.states[0].purity()
    for k, state in enumerate(trace.states):
        try:
            state.validate()
        except ValueError as exc:
            raise ConsistencyError("invalid state at iteration %d: %s" % (k, exc))
        if abs(state.purity() - p0) > 1e-12:
            raise ConsistencyError("purity drift at iteration %d" % k)


def trace_bipartitions(n_qubits: int):
    """The measured bipartitions reported along a trace: (X:Y) and (Y:X)."""
    if n_qubits == 2:
        fwd = Bipartition((0,), (1,))
    else:
        fwd = Bipartition((0, 2), (1,))
    return fwd, fwd.swapped()


def correlation_rows(trace: StateTrace):
    """MI, discord and classical correlations (both directions), EOF (2q)."""
    fwd, rev = trace_bipartitions(trace.spec.n_qubits)
    rows = []
    for state in trace.states:
        mi = mutual_information(state, fwd)
        d_fwd = quantum_discord(state, fwd)
        d_rev = quantum_discord(state, rev)
        row = {
            "MI": mi,
            "D_xy": d_fwd,
            "D_yx": d_rev,
            "CC_xy": max(mi - d_fwd, 0.0),
            "CC_yx": max(mi - d_rev, 0.0),
        }
        if trace.spec.n_qubits == 2:
            row["EOF"] = concurrence_eof(state)[1]
        rows.append(row)
    return rows


def trace_report(cfg: SweepConfig, h: QubitHamiltonian = None):
    """Per-iteration energy (and optionally correlation) table."""
    h = h or QubitHamiltonian()
    trace = _build_trace(cfg, h)
    _validate_trace(trace)
    from .states import build_system_hamiltonian

    records = delta_u(trace, build_system_hamiltonian(h, cfg.n_qubits), h)
    corr = correlation_rows(trace) if cfg.with_correlations else None
    rows = []
    for k, rec in enumerate(records):
        row = {"iteration": rec.iteration, "dU_A": rec.du_per_qubit[0], "dU_B": rec.du_per_qubit[1]}
        if cfg.n_qubits == 3:
            row["dU_C"] = rec.du_per_qubit[2]
        row["dU_sys"] = rec.du_sys
        row["work"] = rec.work
        row["regime"] = rec.regime
        row["eta"] = rec.efficiency
        if corr is not None:
            row.update(corr[k])
        rows.append(row)
    return rows


def cnot_compare(cfg: SweepConfig, h: QubitHamiltonian = None):
    """Work series of the fractional-gate run against the full-CNOT run.

    The full-CNOT run uses M / N iterations so both cover the same number
    of gate cycles.
    """
    h = h or QubitHamiltonian()
    from .states import build_system_hamiltonian

    h_sys = build_system_hamiltonian(h, cfg.n_qubits)
    m = cfg.m_iterations
    if m % cfg.n_root != 0:
        raise ConfigError("iterations must be a multiple of the root order")
    frac_trace = _build_trace(cfg, h)
    full_trace = _build_trace(cfg, h, n_root=1, iterations=m // cfg.n_root)
    frac_work = [r.work for r in delta_u(frac_trace, h_sys, h)]
    full_work = [r.work for r in delta_u(full_trace, h_sys, h)]
    rows = []
    for k in range(m + 1):
        row = {"iteration": k, "work_nrcg": frac_work[k]}
        if k % cfg.n_root == 0:
            row["cycle"] = k // cfg.n_root
            row["work_cnot"] = full_work[k // cfg.n_root]
        else:
            row["cycle"] = None
            row["work_cnot"] = None
        rows.append(row)
    return rows


def pcc_report(cfg: SweepConfig, h: QubitHamiltonian = None):
    """PCC of each correlation measure against work and against dU_B."""
    h = h or QubitHamiltonian()
    from .states import build_system_hamiltonian

    trace = _build_trace(cfg, h)
    _validate_trace(trace)
    records = delta_u(trace, build_system_hamiltonian(h, cfg.n_qubits), h)
    corr = correlation_rows(trace)
    work = [r.work for r in records]
    du_b = [r.du_per_qubit[1] for r in records]
    fwd, rev = trace_bipartitions(cfg.n_qubits)
    measures = {
        "MI": (fwd.label(), [c["MI"] for c in corr]),
        "CC_xy": (fwd.label(), [c["CC_xy"] for c in corr]),
        "CC_yx": (rev.label(), [c["CC_yx"] for c in corr]),
        "D_xy": (fwd.label(), [c["D_xy"] for c in corr]),
        "D_yx": (rev.label(), [c["D_yx"] for c in corr]),
    }
    if cfg.n_qubits == 2:
        measures["EOF"] = (fwd.label(), [c["EOF"] for c in corr])
    rows = []
    for name, (label, series) in measures.items():
        for target_name, target in (("work", work), ("dU_B", du_b)):
            try:
                r = pearson(series, target)
                flag = ""
            except ValueError:
                r = None
                flag = "constant-series"
            rows.append(
                {
                    "measure": name,
                    "bipartition": label,
                    "target": target_name,
                    "pcc": r,
                    "flag": flag,
                }
            )
    # discord against EOF (2-qubit only): both directions
    if cfg.n_qubits == 2:
        eof = [c["EOF"] for c in corr]
        for name in ("D_xy", "D_yx"):
            label, series = measures[name]
            try:
                r = pearson(eof, series)
                flag = ""
            except ValueError:
                r = None
                flag = "constant-series"
            rows.append(
                {
                    "measure": name,
                    "bipartition": label,
                    "target": "EOF",
                    "pcc": r,
                    "flag": flag,
                }
            )
    return rows
