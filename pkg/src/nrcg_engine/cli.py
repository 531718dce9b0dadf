"""Command-line front end.

Six subcommands map one-to-one onto the operations in ``sweeps``:
temp-scan, grid-scan, thermal-baseline, trace, cnot-compare, pcc-report.
Options may come from flags, a JSON config file, or defaults, in that order
of precedence.  Output is CSV (default) or JSON on stdout or ``--out``.

Exit codes: 0 success, 2 configuration error, 3 numerical-consistency
failure during a run.
"""

from __future__ import annotations

import json
import sys

import click

from .protocol import QUBIT_NAMES, NrcgGate
from .sweeps import (
    ConfigError,
    ConsistencyError,
    GridAxis,
    SweepConfig,
    cnot_compare,
    grid_scan,
    pcc_report,
    temp_scan,
    thermal_baseline_scan,
    trace_report,
)

_CONFIG_KEYS = {
    "case",
    "qubits",
    "root",
    "iterations",
    "kt",
    "theta",
    "phi",
    "grid_theta",
    "grid_phi",
    "correlations",
    "jobs",
    "qubitB_mode",
    "gate_sequence",
    "allow_custom",
    "format",
    "out",
}


def _load_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("cannot read config file %s: %s" % (path, exc))
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError("unknown config keys: %s" % ", ".join(sorted(unknown)))
    return data


def _parse_kt(value):
    if value is None:
        return None
    if isinstance(value, (int, float)):
        return (float(value),)
    if isinstance(value, (list, tuple)):
        return tuple(float(v) for v in value)
    try:
        return tuple(float(part) for part in str(value).split(","))
    except ValueError:
        raise ConfigError("cannot parse kT list %r" % value)


def parse_gate_sequence(text: str, n_root: int):
    """Parse "A>B,B>A" into a gate tuple."""
    gates = []
    for token in text.split(","):
        token = token.strip()
        parts = token.split(">")
        if len(parts) != 2 or not all(p in QUBIT_NAMES for p in parts):
            raise ConfigError("bad gate token %r (expected e.g. A>B)" % token)
        gates.append(NrcgGate(n_root, QUBIT_NAMES.index(parts[0]), QUBIT_NAMES.index(parts[1])))
    if not gates:
        raise ConfigError("empty gate sequence")
    return tuple(gates)


def _resolve(flags: dict) -> tuple:
    """Merge flags > config file > defaults into a SweepConfig.

    Returns (config, format, out_path).
    """
    file_cfg = _load_config_file(flags["config"]) if flags.get("config") else {}

    def pick(flag_key, file_key, default):
        if flags.get(flag_key) is not None:
            return flags[flag_key]
        if file_key in file_cfg and file_cfg[file_key] is not None:
            return file_cfg[file_key]
        return default

    n_root = int(pick("root", "root", 15))
    seq_text = pick("gate_sequence", "gate_sequence", None)
    allow_custom = bool(pick("allow_custom", "allow_custom", False))
    sequence = parse_gate_sequence(seq_text, n_root) if seq_text else None

    grid_theta = int(pick("grid_theta", "grid_theta", 101))
    grid_phi = int(pick("grid_phi", "grid_phi", 201))
    kt = _parse_kt(pick("kt", "kt", None)) or (40.0,)

    try:
        cfg = SweepConfig(
            case_id=int(pick("case", "case", 1)),
            n_qubits=int(pick("qubits", "qubits", 2)),
            n_root=n_root,
            kT=kt,
            theta_grid=GridAxis(0.0, 3.141592653589793, grid_theta),
            phi_grid=GridAxis(0.0, 6.283185307179586, grid_phi),
            iterations=(lambda v: None if v is None else int(v))(
                pick("iterations", "iterations", None)
            ),
            b_mode=pick("b_mode", "qubitB_mode", "pure"),
            theta=(lambda v: None if v is None else float(v))(pick("theta", "theta", None)),
            phi=(lambda v: None if v is None else float(v))(pick("phi", "phi", None)),
            with_correlations=bool(pick("correlations", "correlations", False)),
            jobs=int(pick("jobs", "jobs", 1)),
            gate_sequence=sequence,
            allow_custom=allow_custom,
        )
    except ValueError as exc:
        raise ConfigError(str(exc))
    fmt = pick("format", "format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    out = pick("out", "out", None)
    return cfg, fmt, out


def _fmt_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return "%.12g" % (v + 0.0 if v != 0.0 else 0.0)
    return str(v)


def _write_rows(rows, meta, fmt, out):
    rows = list(rows)
    if fmt == "csv":
        header = list(rows[0].keys()) if rows else []
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt_value(row.get(k)) for k in header))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"meta": meta, "records": rows}, indent=2, sort_keys=True)
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _common(func):
    opts = [
        click.option("--case", type=click.IntRange(1, 2), default=None),
        click.option("--qubits", type=click.IntRange(2, 3), default=None),
        click.option("--root", type=int, default=None, help="Gate root order N."),
        click.option("--iterations", type=int, default=None),
        click.option("--kt", type=str, default=None, help="kT value or comma list."),
        click.option("--theta", type=float, default=None),
        click.option("--phi", type=float, default=None),
        click.option("--grid-theta", type=int, default=None, help="Theta grid points."),
        click.option("--grid-phi", type=int, default=None, help="Phi grid points."),
        click.option("--correlations", is_flag=True, default=None),
        click.option("--jobs", type=int, default=None),
        click.option("--out", type=click.Path(), default=None),
        click.option("--format", "format", type=click.Choice(["csv", "json"]), default=None),
        click.option("--config", type=click.Path(exists=False), default=None),
        click.option("--gate-sequence", "gate_sequence", type=str, default=None),
        click.option("--allow-custom", is_flag=True, default=None),
    ]
    for opt in reversed(opts):
        func = opt(func)
    return func


def _run(flags, op):
    try:
        cfg, fmt, out = _resolve(flags)
        rows, extra_meta = op(cfg)
    except ConfigError as exc:
        click.echo("config error: %s" % exc, err=True)
        sys.exit(2)
    except ConsistencyError as exc:
        click.echo("numerical-consistency failure: %s" % exc, err=True)
        sys.exit(3)
    meta = cfg.meta()
    meta.update(extra_meta)
    _write_rows(rows, meta, fmt, out)


@click.group()
def main():
    """Few-qubit heat-engine sweeps driven by fractional CNOT circuits."""


@main.command("temp-scan")
@_common
def temp_scan_cmd(**flags):
    """Global max work per temperature over the full theta-phi grid."""

    def op(cfg):
        return temp_scan(cfg), {}

    _run(flags, op)


@main.command("grid-scan")
@_common
def grid_scan_cmd(**flags):
    """Max-work map over the theta-phi grid at one temperature."""

    def op(cfg):
        res = grid_scan(cfg)
        work, theta, phi, k = res.best()
        rows = [
            {
                "theta": c.theta,
                "phi": c.phi,
                "max_work": c.max_work,
                "argmax_iteration": c.argmax_iteration,
                "regime_at_max": c.regime_at_max,
            }
            for c in res.cells()
        ]
        best = {"max_work": work, "theta": theta, "phi": phi, "iteration": k}
        click.echo(
            "best: work=%.6f theta=%.6f phi=%.6f iteration=%d" % (work, theta, phi, k),
            err=True,
        )
        return rows, {"best": best}

    _run(flags, op)


@main.command("thermal-baseline")
@_common
def thermal_baseline_cmd(**flags):
    """Dephased-initialization scan compared against the pure-state scan."""

    def op(cfg):
        rep = thermal_baseline_scan(cfg)
        rows = [
            {
                "theta": c.theta,
                "phi": c.phi,
                "max_work": c.max_work,
                "argmax_iteration": c.argmax_iteration,
                "regime_at_max": c.regime_at_max,
            }
            for c in rep.thermal.cells()
        ]
        extra = {
            "thermal_max": rep.thermal_max,
            "pure_max": rep.pure_max,
            "relative_change_percent": rep.relative_change_percent,
        }
        click.echo(
            "thermal max %.6f, pure max %.6f, change %.2f%%"
            % (rep.thermal_max, rep.pure_max, rep.relative_change_percent),
            err=True,
        )
        return rows, extra

    _run(flags, op)


@main.command("trace")
@_common
def trace_cmd(**flags):
    """Per-iteration energy (and optional correlation) table at one point."""

    def op(cfg):
        return trace_report(cfg), {}

    _run(flags, op)


@main.command("cnot-compare")
@_common
def cnot_compare_cmd(**flags):
    """Work series of the fractional gate against the full CNOT."""

    def op(cfg):
        return cnot_compare(cfg), {}

    _run(flags, op)


@main.command("pcc-report")
@_common
def pcc_report_cmd(**flags):
    """Pearson correlations of each measure against work and dU_B."""

    def op(cfg):
        return pcc_report(cfg), {}

    _run(flags, op)


if __name__ == "__main__":
    main()
