"""Scenario and sweep configuration files.

A scenario is a single YAML document with the sections

    name:        identifier used for output files
    description: free text
    system:      kind: smib | synthetic, plus model fields
    fault:       t_apply / t_clear (smib only, optional)
    grid:        t_end / dt (t0 is always 0)
    analysis:    estimator, identity bound, classifier thresholds
    output:      columns subset (optional)

and a sweep wraps a scenario under ``base:`` plus a ``sweep:`` section
naming one numeric field (dotted path) and the values to scan.

Validation is strict: unknown keys anywhere are rejected, and every
error carries the dotted path of the offending field so callers can
report ``config error at system.H: ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import math
import yaml

from .metric import ClassifierPolicy
from .pll import PllParams
from .simulator import FaultSchedule, SmibParams, SyntheticSpec
from .signals import TimeGrid

# column order of emitted series files; selections must stay within it
CSV_COLUMNS = (
    "t",
    "delta",
    "omega_pu",
    "v_d",
    "v_q",
    "i_d",
    "i_q",
    "p",
    "q",
    "rho_v",
    "omega_v",
    "rho_i",
    "omega_i",
    "psi_cf",
    "psi_numeric",
    "psi_normalized",
    "freq_term",
    "var_term",
)

_SYNTH_FIELDS = (
    "v_mag",
    "i_mag",
    "v_phase",
    "i_phase",
    "omega1",
    "omega2",
    "mod_depth",
    "mod_freq",
    "drift_rate",
    "envelope_rate",
)


class ConfigError(ValueError):
    """Invalid configuration; ``path`` is the dotted field location."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"at {path}: {message}" if path else message)


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _mapping(node, path: str) -> dict:
    if node is None:
        return {}
    if not isinstance(node, dict):
        raise ConfigError(path, f"expected a mapping, got {type(node).__name__}")
    return dict(node)


def _reject_unknown(node: dict, path: str) -> None:
    if node:
        key = sorted(str(k) for k in node)[0]
        raise ConfigError(_join(path, key), "unknown key")


def _number(node: dict, key: str, path: str, default=None, required: bool = False) -> float:
    if key not in node:
        if required:
            raise ConfigError(_join(path, key), "required field missing")
        return default
    value = node.pop(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(_join(path, key), f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(_join(path, key), "must be finite")
    return value


def _string(node: dict, key: str, path: str, default=None, required: bool = False) -> str:
    if key not in node:
        if required:
            raise ConfigError(_join(path, key), "required field missing")
        return default
    value = node.pop(key)
    if not isinstance(value, str):
        raise ConfigError(_join(path, key), f"expected a string, got {value!r}")
    return value


def _choice(value: str, allowed: tuple, path: str) -> str:
    if value not in allowed:
        raise ConfigError(path, f"expected one of {', '.join(allowed)}, got {value!r}")
    return value


@dataclass
class ScenarioConfig:
    """Fully validated scenario, ready to execute."""

    name: str
    description: str
    kind: str
    grid: TimeGrid
    smib: SmibParams | None = None
    fault: FaultSchedule | None = None
    synthetic: SyntheticSpec | None = None
    estimator: str = "fd"
    pll: PllParams = field(default_factory=PllParams)
    policy: ClassifierPolicy = field(default_factory=ClassifierPolicy)
    max_identity_gap: float = 0.01
    columns: tuple = CSV_COLUMNS
    seed: int | None = None


@dataclass
class SweepConfig:
    """One numeric axis scanned over a base scenario document."""

    axis: str
    values: tuple
    base_doc: dict
    name: str


def _parse_grid(node, path: str) -> TimeGrid:
    node = _mapping(node, path)
    t_end = _number(node, "t_end", path, required=True)
    dt = _number(node, "dt", path, required=True)
    _reject_unknown(node, path)
    if dt <= 0.0:
        raise ConfigError(_join(path, "dt"), "must be positive")
    if t_end <= 0.0:
        raise ConfigError(_join(path, "t_end"), "must be positive")
    n = int(round(t_end / dt)) + 1
    if n < 5:
        raise ConfigError(path, f"t_end/dt gives only {n} samples; need at least 5")
    return TimeGrid(0.0, dt, n)


def _parse_smib(node: dict, path: str) -> SmibParams:
    scale = _number(node, "x_line_scale", path, default=1.0)
    if scale <= 0.0:
        raise ConfigError(_join(path, "x_line_scale"), "must be positive")
    fields = {
        "H": _number(node, "H", path, required=True),
        "D": _number(node, "D", path, required=True),
        "x_gen": _number(node, "x_gen", path, required=True),
        "x_line_prefault": scale * _number(node, "x_line_prefault", path, required=True),
        "x_line_fault": _number(node, "x_line_fault", path, required=True),
        "x_line_postfault": scale * _number(node, "x_line_postfault", path, required=True),
        "E": _number(node, "E", path, default=1.1),
        "V_inf": _number(node, "V_inf", path, default=1.0),
        "Pm": _number(node, "Pm", path, default=0.9),
        "omega_n": 2.0 * math.pi * _number(node, "f_nominal", path, default=60.0),
    }
    _reject_unknown(node, path)
    try:
        return SmibParams(**fields)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_synthetic(node: dict, path: str, grid: TimeGrid) -> SyntheticSpec:
    template = _string(node, "template", path, required=True)
    fields = {}
    for key in _SYNTH_FIELDS:
        value = _number(node, key, path)
        if value is not None:
            fields[key] = value
    _reject_unknown(node, path)
    try:
        return SyntheticSpec(template=template, grid=grid, **fields)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_fault(node, path: str, grid: TimeGrid) -> FaultSchedule:
    node = _mapping(node, path)
    t_apply = _number(node, "t_apply", path, required=True)
    t_clear = _number(node, "t_clear", path, required=True)
    _reject_unknown(node, path)
    for label, t in (("t_apply", t_apply), ("t_clear", t_clear)):
        steps = t / grid.dt
        if abs(steps - round(steps)) > 1e-9 * max(1.0, abs(steps)):
            raise ConfigError(_join(path, label), f"{t} is not a multiple of grid dt={grid.dt}")
        if not 0.0 < t < grid.t_end:
            raise ConfigError(_join(path, label), f"{t} lies outside the grid (0, {grid.t_end})")
    try:
        return FaultSchedule(t_apply, t_clear)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_policy(node, path: str, disturbance_default: float | None) -> ClassifierPolicy:
    node = _mapping(node, path)
    fields = {
        "eps_sync": _number(node, "eps_sync", path, default=1e-6),
        "tail_window": _number(node, "tail_window", path, default=1.0),
        "divergence_cap": _number(node, "divergence_cap", path, default=1e6),
        "growth_factor": _number(node, "growth_factor", path, default=10.0),
        "guard": _number(node, "guard", path, default=0.01),
        "disturbance_end": _number(node, "disturbance_end", path, default=disturbance_default),
    }
    _reject_unknown(node, path)
    try:
        return ClassifierPolicy(**fields)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def parse_scenario(doc, source: str = "scenario") -> ScenarioConfig:
    """Validate a raw YAML document into a :class:`ScenarioConfig`.

    Raises
    ------
    ConfigError
        On any schema or value violation, with the dotted field path.
    """
    top = _mapping(doc, "")
    if not top:
        raise ConfigError("", f"{source} is empty")
    name = _string(top, "name", "", required=True)
    description = _string(top, "description", "", default="")
    system = _mapping(top.pop("system", None), "system")
    if not system:
        raise ConfigError("system", "required section missing")
    grid = _parse_grid(top.pop("grid", None) or None, "grid")
    kind = _choice(_string(system, "kind", "system", required=True), ("smib", "synthetic"), "system.kind")

    smib = fault = synthetic = None
    if kind == "smib":
        smib = _parse_smib(system, "system")
        if "fault" in top:
            fault = _parse_fault(top.pop("fault"), "fault", grid)
    else:
        synthetic = _parse_synthetic(system, "system", grid)
        if "fault" in top:
            raise ConfigError("fault", "synthetic scenarios take no fault section")

    analysis = _mapping(top.pop("analysis", None), "analysis")
    estimator = _choice(
        _string(analysis, "estimator", "analysis", default="fd"), ("fd", "pll"), "analysis.estimator"
    )
    max_gap = _number(analysis, "max_identity_gap", "analysis", default=0.01)
    if max_gap <= 0.0:
        raise ConfigError("analysis.max_identity_gap", "must be positive")
    disturbance_default = fault.t_clear if fault is not None else None
    policy = _parse_policy(analysis.pop("classifier", None), "analysis.classifier", disturbance_default)
    _reject_unknown(analysis, "analysis")

    output = _mapping(top.pop("output", None), "output")
    columns = CSV_COLUMNS
    if "columns" in output:
        raw = output.pop("columns")
        if not isinstance(raw, list) or not raw:
            raise ConfigError("output.columns", "expected a non-empty list of column names")
        for col in raw:
            if col not in CSV_COLUMNS:
                raise ConfigError("output.columns", f"unknown column {col!r}")
        columns = tuple(col for col in CSV_COLUMNS if col in raw)
    _reject_unknown(output, "output")
    _reject_unknown(top, "")

    omega_o = smib.omega_n if smib is not None else PllParams().omega_o
    return ScenarioConfig(
        name=name,
        description=description,
        kind=kind,
        grid=grid,
        smib=smib,
        fault=fault,
        synthetic=synthetic,
        estimator=estimator,
        pll=PllParams(omega_o=omega_o),
        policy=policy,
        max_identity_gap=max_gap,
        columns=columns,
    )


def parse_sweep(doc, source: str = "sweep") -> SweepConfig:
    """Validate a sweep document: a base scenario plus one numeric axis."""
    top = _mapping(doc, "")
    sweep = _mapping(top.pop("sweep", None), "sweep")
    if not sweep:
        raise ConfigError("sweep", "required section missing")
    axis = _string(sweep, "axis", "sweep", required=True)
    raw_values = sweep.pop("values", None)
    if not isinstance(raw_values, list) or not raw_values:
        raise ConfigError("sweep.values", "expected a non-empty list of numbers")
    values = []
    for k, value in enumerate(raw_values):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ConfigError(f"sweep.values[{k}]", f"expected a finite number, got {value!r}")
        values.append(float(value))
    _reject_unknown(sweep, "sweep")

    base = top.pop("base", None)
    if not isinstance(base, dict) or not base:
        raise ConfigError("base", "required section missing")
    _reject_unknown(top, "")

    parts = axis.split(".")
    node = base
    for part in parts[:-1]:
        node = node.get(part) if isinstance(node, dict) else None
        if node is None:
            raise ConfigError(_join("base", axis), "axis parent section not found in base")
    if not isinstance(node, dict):
        raise ConfigError(_join("base", axis), "axis parent section not found in base")
    leaf = node.get(parts[-1])
    if leaf is not None and (isinstance(leaf, bool) or not isinstance(leaf, (int, float))):
        raise ConfigError(_join("base", axis), "axis must name a numeric field")

    # the base must itself be a valid scenario once any axis value is set
    probe = apply_axis(base, axis, values[0])
    parsed = parse_scenario(probe, source)
    return SweepConfig(axis=axis, values=tuple(values), base_doc=base, name=parsed.name)


def apply_axis(base_doc: dict, axis: str, value: float) -> dict:
    """Deep-copy the base document with ``axis`` set to ``value``."""
    import copy

    doc = copy.deepcopy(base_doc)
    node = doc
    parts = axis.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    node[parts[-1]] = value
    return doc


def load_document(path) -> dict:
    """Read one YAML document; multi-document files are rejected."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        docs = list(yaml.safe_load_all(text))
    except yaml.YAMLError as exc:
        raise ConfigError("", f"not valid YAML: {exc}") from exc
    if len(docs) != 1:
        raise ConfigError("", f"expected a single YAML document, found {len(docs)}")
    return docs[0]


def load_scenario(path) -> ScenarioConfig:
    return parse_scenario(load_document(path), str(path))


def load_sweep(path) -> SweepConfig:
    return parse_sweep(load_document(path), str(path))
