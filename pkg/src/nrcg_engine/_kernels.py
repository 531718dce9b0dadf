"""Hot numeric inner loops.

Two loops dominate runtime: evolving every point of a theta-phi
initialization grid, and the projective-measurement scan inside the discord
minimization.  Both are written in a numba-compatible numpy subset and
JIT-compiled on import.  Set ``NRCG_ENGINE_DISABLE_NUMBA=1`` in the
environment to run the same functions as plain Python (slow, bit-identical;
used by the benchmark and as a fallback).
"""

from __future__ import annotations

import math
import os

import numpy as np

USE_NUMBA = os.environ.get("NRCG_ENGINE_DISABLE_NUMBA", "0") != "1"

if USE_NUMBA:
    try:
        from numba import njit as _jit_impl

        def _jit(f):
            return _jit_impl(cache=True)(f)

    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:

    def _jit(f):
        return f


@_jit
def _product_state(rho_a, rho_b, n_qubits):
    """rho_a (x) rho_b [(x) rho_a] with explicit index loops."""
    if n_qubits == 2:
        out = np.empty((4, 4), dtype=np.complex128)
        for a in range(2):
            for b in range(2):
                for a2 in range(2):
                    for b2 in range(2):
                        out[a * 2 + b, a2 * 2 + b2] = rho_a[a, a2] * rho_b[b, b2]
        return out
    out = np.empty((8, 8), dtype=np.complex128)
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for a2 in range(2):
                    for b2 in range(2):
                        for c2 in range(2):
                            out[(a * 2 + b) * 2 + c, (a2 * 2 + b2) * 2 + c2] = (
                                rho_a[a, a2] * rho_b[b, b2] * rho_a[c, c2]
                            )
    return out


@_jit
def evolve_populations(rho0, u, m):
    """Diagonal populations of u^k rho0 u^{-k} for k = 0..m."""
    dim = rho0.shape[0]
    pops = np.empty((m + 1, dim), dtype=np.float64)
    rho = rho0.copy()
    for i in range(dim):
        pops[0, i] = rho[i, i].real
    uh = np.ascontiguousarray(u.conj().T)
    for k in range(1, m + 1):
        rho = u @ rho @ uh
        for i in range(dim):
            pops[k, i] = rho[i, i].real
    return pops


@_jit
def scan_grid(u, rho_a, thetas, phis, m, n_qubits, qweights, coherent):
    """Max extractable work over a theta-phi grid of qubit-B initializations.

    qweights[q, i] is the energy qubit q contributes in basis state i, so
    the system energy at iteration k is sum_q qweights[q] . populations(k).
    Returns per-cell max work, the first iteration attaining it, and the
    per-qubit energy changes at that iteration.
    """
    nt = thetas.shape[0]
    nph = phis.shape[0]
    nq = qweights.shape[0]
    dim = 2**n_qubits
    max_work = np.empty((nt, nph), dtype=np.float64)
    argmax_iter = np.zeros((nt, nph), dtype=np.int64)
    du_at_max = np.zeros((nt, nph, nq), dtype=np.float64)
    uh = np.ascontiguousarray(u.conj().T)
    rho_b = np.empty((2, 2), dtype=np.complex128)
    for it in range(nt):
        half = thetas[it] / 2.0
        c = math.cos(half)
        s = math.sin(half)
        for ip in range(nph):
            rho_b[0, 0] = c * c
            rho_b[1, 1] = s * s
            if coherent:
                ph = phis[ip]
                off = c * s * complex(math.cos(ph), -math.sin(ph))
                rho_b[0, 1] = off
                rho_b[1, 0] = off.conjugate()
            else:
                rho_b[0, 1] = 0.0
                rho_b[1, 0] = 0.0
            rho = _product_state(rho_a, rho_b, n_qubits)
            u_q0 = np.zeros(nq, dtype=np.float64)
            for q in range(nq):
                for i in range(dim):
                    u_q0[q] += qweights[q, i] * rho[i, i].real
            u_sys0 = u_q0.sum()
            best = -1.0e300
            best_k = 0
            best_du = np.zeros(nq, dtype=np.float64)
            for k in range(1, m + 1):
                rho = u @ rho @ uh
                u_sys = 0.0
                u_q = np.zeros(nq, dtype=np.float64)
                for q in range(nq):
                    for i in range(dim):
                        u_q[q] += qweights[q, i] * rho[i, i].real
                    u_sys += u_q[q]
                work = u_sys0 - u_sys
                if work > best:
                    best = work
                    best_k = k
                    for q in range(nq):
                        best_du[q] = u_q[q] - u_q0[q]
            max_work[it, ip] = best
            argmax_iter[it, ip] = best_k
            for q in range(nq):
                du_at_max[it, ip, q] = best_du[q]
    return max_work, argmax_iter, du_at_max


@_jit
def _entropy_clamped(ev):
    out = 0.0
    for i in range(ev.shape[0]):
        lam = ev[i]
        if lam > 1e-14:
            out -= lam * math.log(lam)
    return out


@_jit
def _measurement_pair(theta, phi):
    """Orthonormal pair {u, v} parameterizing a single-qubit measurement."""
    half = theta / 2.0
    c = math.cos(half)
    s = math.sin(half)
    e = complex(math.cos(phi), math.sin(phi))
    u = np.empty(2, dtype=np.complex128)
    v = np.empty(2, dtype=np.complex128)
    u[0] = c
    u[1] = s * e
    v[0] = s * e.conjugate()
    v[1] = -c
    return u, v


@_jit
def cond_entropy_meas1(rho, d_keep, theta, phi):
    """Conditional entropy with a projective measurement on the last qubit.

    ``rho`` must be ordered so the kept subsystem (dimension d_keep) comes
    first and the measured qubit last.
    """
    u, v = _measurement_pair(theta, phi)
    total = 0.0
    red = np.empty((d_keep, d_keep), dtype=np.complex128)
    for outcome in range(2):
        w = u if outcome == 0 else v
        p = 0.0
        for i in range(d_keep):
            for j in range(d_keep):
                acc = 0.0 + 0.0j
                for k in range(2):
                    for l in range(2):
                        acc += w[k].conjugate() * rho[i * 2 + k, j * 2 + l] * w[l]
                red[i, j] = acc
            p += red[i, i].real
        if p < 1e-14:
            continue
        ev = np.linalg.eigvalsh(red / p)
        total += p * _entropy_clamped(ev)
    return total


@_jit
def cond_entropy_meas2(rho, theta, phi, theta2, phi2):
    """Conditional entropy of the first qubit of a 3-qubit state after a
    product measurement on the last two qubits."""
    u1, v1 = _measurement_pair(theta, phi)
    u2, v2 = _measurement_pair(theta2, phi2)
    w = np.empty(4, dtype=np.complex128)
    total = 0.0
    for o1 in range(2):
        a = u1 if o1 == 0 else v1
        for o2 in range(2):
            b = u2 if o2 == 0 else v2
            for k in range(2):
                for l in range(2):
                    w[k * 2 + l] = a[k] * b[l]
            r00 = 0.0 + 0.0j
            r01 = 0.0 + 0.0j
            r11 = 0.0 + 0.0j
            for k in range(4):
                for l in range(4):
                    ww = w[k].conjugate() * w[l]
                    r00 += ww * rho[k, l]
                    r01 += ww * rho[k, 4 + l]
                    r11 += ww * rho[4 + k, 4 + l]
            p = r00.real + r11.real
            if p < 1e-14:
                continue
            # analytic eigenvalues of the 2x2 conditional state
            tr = p
            diff = r00.real - r11.real
            disc = math.sqrt(diff * diff + 4.0 * abs(r01) ** 2)
            lam1 = (tr + disc) / (2.0 * p)
            lam2 = (tr - disc) / (2.0 * p)
            ent = 0.0
            if lam1 > 1e-14:
                ent -= lam1 * math.log(lam1)
            if lam2 > 1e-14:
                ent -= lam2 * math.log(lam2)
            total += p * ent
    return total


@_jit
def min_cond_entropy_meas1(rho, d_keep, thetas, phis):
    """Grid minimum of cond_entropy_meas1; returns (value, theta, phi)."""
    best = 1.0e300
    bt = 0.0
    bp = 0.0
    for it in range(thetas.shape[0]):
        for ip in range(phis.shape[0]):
            val = cond_entropy_meas1(rho, d_keep, thetas[it], phis[ip])
            if val < best:
                best = val
                bt = thetas[it]
                bp = phis[ip]
    return best, bt, bp


@_jit
def min_cond_entropy_meas2(rho, thetas, phis):
    """Grid minimum of cond_entropy_meas2 over both measured qubits."""
    best = 1.0e300
    angles = np.zeros(4, dtype=np.float64)
    for i1 in range(thetas.shape[0]):
        for j1 in range(phis.shape[0]):
            for i2 in range(thetas.shape[0]):
                for j2 in range(phis.shape[0]):
                    val = cond_entropy_meas2(
                        rho, thetas[i1], phis[j1], thetas[i2], phis[j2]
                    )
                    if val < best:
                        best = val
                        angles[0] = thetas[i1]
                        angles[1] = phis[j1]
                        angles[2] = thetas[i2]
                        angles[3] = phis[j2]
    return best, angles
