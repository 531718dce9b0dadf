"""Timing comparison of the JIT-compiled kernels against the pure-numpy path.

Runs a reduced grid scan and a discord minimization twice: once in the
current process (numba on by default) and once in a subprocess with
``NRCG_ENGINE_DISABLE_NUMBA=1``.  Results from both paths are compared for
agreement before the timings are printed.

Usage: python benchmarks/bench_kernels.py
"""

import json
import math
import os
import subprocess
import sys
import time

GRID_THETA = 21
GRID_PHI = 21

_WORKER = r"""
import json, math, sys, time
from nrcg_engine.sweeps import SweepConfig, GridAxis, grid_scan
from nrcg_engine.states import InitConfig, initial_system_state
from nrcg_engine.protocol import ProtocolSpec, run_trace
from nrcg_engine.correlations import Bipartition, quantum_discord

grid_theta, grid_phi = json.loads(sys.argv[1])

# warm-up triggers JIT compilation so it is not timed
cfg_small = SweepConfig(case_id=1, n_qubits=2,
                        theta_grid=GridAxis(0.0, math.pi, 2),
                        phi_grid=GridAxis(0.0, 2 * math.pi, 2))
grid_scan(cfg_small)

cfg = SweepConfig(case_id=2, n_qubits=3,
                  theta_grid=GridAxis(0.0, math.pi, grid_theta),
                  phi_grid=GridAxis(0.0, 2 * math.pi, grid_phi))
t0 = time.perf_counter()
res = grid_scan(cfg)
t_grid = time.perf_counter() - t0
best = res.best()

init_cfg = InitConfig(kT=40.0, n_qubits=3, theta=0.79 * math.pi, phi=0.08 * math.pi)
state = run_trace(initial_system_state(init_cfg), ProtocolSpec(2, 3), 30, init_cfg).states[30]
bp = Bipartition((1,), (0, 2))
t0 = time.perf_counter()
d = quantum_discord(state, bp)
t_discord = time.perf_counter() - t0

print(json.dumps({"t_grid": t_grid, "t_discord": t_discord,
                  "best_work": best[0], "discord": d}))
"""


def run_path(disable_numba):
    env = dict(os.environ)
    env["NRCG_ENGINE_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    out = subprocess.run(
        [sys.executable, "-c", _WORKER, json.dumps([GRID_THETA, GRID_PHI])],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    print("grid %dx%d scan (case 2, 3 qubits) + one 2-qubit-measurement discord"
          % (GRID_THETA, GRID_PHI))
    jit = run_path(disable_numba=False)
    plain = run_path(disable_numba=True)
    if abs(jit["best_work"] - plain["best_work"]) > 1e-12:
        raise SystemExit("path disagreement on grid scan result")
    if abs(jit["discord"] - plain["discord"]) > 1e-9:
        raise SystemExit("path disagreement on discord result")
    print("%-22s %12s %12s %9s" % ("kernel", "numba [s]", "numpy [s]", "speedup"))
    for key, name in (("t_grid", "grid scan"), ("t_discord", "discord minimum")):
        print("%-22s %12.3f %12.3f %8.1fx"
              % (name, jit[key], plain[key], plain[key] / jit[key]))
    print("results agree: work %.12g, discord %.12g" % (jit["best_work"], jit["discord"]))


if __name__ == "__main__":
    main()
