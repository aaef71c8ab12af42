"""Scenario execution, identity verification, sweeps, and file output.

Series files are CSV with a mandatory header and one row per sample.
Floats are written with ``repr``, the shortest representation that
round-trips exactly, so re-running a scenario always produces
byte-identical output and a re-read series reproduces the analysis to
machine precision.  Summary records are JSON with NaN mapped to null.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import CSV_COLUMNS, ConfigError, ScenarioConfig, SweepConfig, apply_axis, parse_scenario
from .metric import SyncStatus, SyncVerdict, classify_sync
from .pipeline import AnalysisResult, IdentityReport, analyze, identity_gap
from .simulator import smib_simulate, synthetic_signal
from .signals import TimeGrid, complex_power

# samples skipped on each side of a reactance switching when comparing
# the two SE routes; stencils straddling the switch measure the jump
_GUARD_STENCIL = 5


@dataclass
class ScenarioRun:
    """In-memory outcome of one scenario execution."""

    config: ScenarioConfig
    grid: TimeGrid
    columns: dict
    analysis: AnalysisResult
    verdict: SyncVerdict
    identity: IdentityReport
    diverged: bool


@dataclass
class VerifyReport:
    """Two-resolution agreement check of the SE routes."""

    coarse: IdentityReport
    fine: IdentityReport
    order: float | None
    bound: float
    passed: bool


def _switch_windows(config: ScenarioConfig, dt: float) -> tuple:
    if config.fault is None:
        return ()
    g = max(config.policy.guard, _GUARD_STENCIL * dt)
    return (
        (config.fault.t_apply - g, config.fault.t_apply + g),
        (config.fault.t_clear - g, config.fault.t_clear + g),
    )


def execute_scenario(config: ScenarioConfig) -> ScenarioRun:
    """Simulate or synthesize, analyze, and classify one scenario."""
    if config.kind == "smib":
        sim = smib_simulate(config.smib, config.fault, config.grid)
        grid = sim.grid
        v, i, s = sim.v_bus, sim.i_inj, sim.s_inj
        delta, omega_pu = sim.delta, sim.omega_pu
        diverged = sim.diverged
    else:
        v, i = synthetic_signal(config.synthetic)
        grid = config.grid
        s = complex_power(v, i)
        delta = np.full(grid.n, math.nan)
        omega_pu = np.full(grid.n, math.nan)
        diverged = False

    analysis = analyze(v, i, config.estimator, config.pll)
    verdict = classify_sync(analysis.se, config.policy)
    if diverged:
        # the angle cap fired: the rotor ran away.  A record truncated
        # this early grows polynomially, too slowly for the window-ratio
        # tests of the SE-only classifier, so the simulator's own
        # divergence signal decides.
        verdict = SyncVerdict(
            SyncStatus.LOSS_OF_SYNCHRONISM, None, verdict.peak_psi, verdict.tail_mean_psi
        )
    identity = identity_gap(analysis, _switch_windows(config, grid.dt))

    columns = {
        "t": grid.times(),
        "delta": delta,
        "omega_pu": omega_pu,
        "v_d": v.d,
        "v_q": v.q,
        "i_d": i.d,
        "i_q": i.q,
        "p": s.d,
        "q": s.q,
        "rho_v": analysis.cf_v.rho,
        "omega_v": analysis.cf_v.omega,
        "rho_i": analysis.cf_i.rho,
        "omega_i": analysis.cf_i.omega,
        "psi_cf": analysis.se.psi,
        "psi_numeric": analysis.psi_numeric.value,
        "psi_normalized": analysis.normalized,
        "freq_term": analysis.se.freq_term,
        "var_term": analysis.se.var_term,
    }
    return ScenarioRun(config, grid, columns, analysis, verdict, identity, diverged)


def verify_scenario(config: ScenarioConfig) -> VerifyReport:
    """Compare the SE routes at the configured dt and at dt/2.

    The observed convergence order is log2 of the gap ratio; it is None
    when either gap vanishes (exactly representable scenarios).
    """
    coarse = execute_scenario(config).identity
    fine_grid = TimeGrid(0.0, config.grid.dt / 2.0, 2 * config.grid.n - 1)
    fine_config = dataclasses.replace(config, grid=fine_grid)
    if config.synthetic is not None:
        fine_config = dataclasses.replace(
            fine_config, synthetic=dataclasses.replace(config.synthetic, grid=fine_grid)
        )
    fine = execute_scenario(fine_config).identity
    if coarse.rel_gap > 0.0 and fine.rel_gap > 0.0:
        order = math.log2(coarse.rel_gap / fine.rel_gap)
    else:
        order = None
    passed = coarse.rel_gap <= config.max_identity_gap
    return VerifyReport(coarse, fine, order, config.max_identity_gap, passed)


def write_series_csv(path, columns: dict, order: tuple = CSV_COLUMNS) -> None:
    """Write selected columns as CSV; floats via repr (exact round-trip)."""
    arrays = [columns[name] for name in order]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(order)
        for row in zip(*arrays):
            writer.writerow([repr(float(x)) for x in row])


def read_series_csv(path) -> dict:
    """Read a series CSV back into arrays keyed by column name."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader]
    data = np.asarray(rows, dtype=float)
    return {name: data[:, k] for k, name in enumerate(header)}


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def summarize_run(run: ScenarioRun, series_file: str | None, seed: int | None = None) -> dict:
    verdict = run.verdict
    return {
        "name": run.config.name,
        "kind": run.config.kind,
        "estimator": run.config.estimator,
        "status": verdict.status.value,
        "settle_time": _jsonable(verdict.settle_time),
        "peak_psi": _jsonable(verdict.peak_psi),
        "tail_mean_psi": _jsonable(verdict.tail_mean_psi),
        "diverged": run.diverged,
        "dt": run.grid.dt,
        "n_samples": run.grid.n,
        "t_end_effective": run.grid.t_end,
        "identity_rel_gap": _jsonable(run.identity.rel_gap),
        "identity_max_abs_gap": _jsonable(run.identity.max_abs_gap),
        "identity_scale": _jsonable(run.identity.scale),
        "series_csv": series_file,
        "seed": seed,
    }


def run_scenario(
    config: ScenarioConfig,
    out_dir,
    emit_series: bool = True,
    seed: int | None = None,
) -> dict:
    """Execute a scenario and write its series CSV and summary JSON.

    Returns the summary record.  A diverged simulation still succeeds:
    the series covers the samples computed before truncation and the
    summary carries ``diverged: true``.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    run = execute_scenario(config)
    series_file = None
    if emit_series:
        series_file = f"{config.name}.csv"
        write_series_csv(out_dir / series_file, run.columns, config.columns)
    summary = summarize_run(run, series_file, seed)
    (out_dir / f"{config.name}.summary.json").write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8"
    )
    return summary


_SWEEP_FIELDS = (
    "value",
    "status",
    "settle_time",
    "peak_psi",
    "tail_mean_psi",
    "identity_rel_gap",
    "diverged",
    "error",
)


def run_sweep(
    sweep: SweepConfig,
    out_dir,
    emit_series: bool = False,
    seed: int | None = None,
) -> dict:
    """Run the base scenario once per axis value and tabulate the results.

    A failing value (invalid parameters, no equilibrium) is recorded in
    its row and the sweep continues.  Rows keep the order of the
    configured values.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    axis_slug = sweep.axis.replace(".", "_")
    rows = []
    for value in sweep.values:
        row = {name: "" for name in _SWEEP_FIELDS}
        row["value"] = value
        try:
            config = parse_scenario(apply_axis(sweep.base_doc, sweep.axis, value))
            config = dataclasses.replace(config, name=f"{sweep.name}__{axis_slug}_{value:g}")
            run = execute_scenario(config)
            if emit_series:
                write_series_csv(out_dir / f"{config.name}.csv", run.columns, config.columns)
            row.update(
                status=run.verdict.status.value,
                settle_time=run.verdict.settle_time,
                peak_psi=run.verdict.peak_psi,
                tail_mean_psi=run.verdict.tail_mean_psi,
                identity_rel_gap=run.identity.rel_gap,
                diverged=run.diverged,
            )
        except (ConfigError, ValueError) as exc:
            row["error"] = str(exc)
        rows.append(row)

    table_file = f"{sweep.name}.sweep.csv"
    with open(out_dir / table_file, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("axis",) + _SWEEP_FIELDS)
        for row in rows:
            out = [sweep.axis]
            for name in _SWEEP_FIELDS:
                value = row[name]
                if isinstance(value, bool):
                    out.append("true" if value else "false")
                elif isinstance(value, float) or isinstance(value, int):
                    out.append(repr(float(value)))
                elif value is None:
                    out.append("nan")
                else:
                    out.append(value)
            writer.writerow(out)

    json_rows = []
    for row in rows:
        record = {}
        for name in _SWEEP_FIELDS:
            value = row[name]
            if name != "error" and value == "":
                record[name] = None  # field never computed for this row
            elif isinstance(value, (bool, str)) or value is None:
                record[name] = value
            else:
                record[name] = _jsonable(float(value))
        json_rows.append(record)
    summary = {
        "name": sweep.name,
        "axis": sweep.axis,
        "values": list(sweep.values),
        "rows": json_rows,
        "table_csv": table_file,
        "seed": seed,
    }
    (out_dir / f"{sweep.name}.sweep.summary.json").write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8"
    )
    return summary
