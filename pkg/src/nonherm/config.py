"""JSON run configuration.

Example::

    {
      "model": "two_level",
      "alpha": 1.0, "beta": 1.0, "e1": "1+1i", "e2": "1-1i",
      "evolution": {"c": ["1", "1"], "d": ["1", "0"],
                    "t_start": 0, "t_end": 10, "n_steps": 1001},
      "tolerances": {"tol_eig": 1e-10},
      "output": "trace.csv"
    }

``model`` is one of ``two_level``, ``das_greenwood`` or ``matrix``.  See the
README for the full schema, including ``scan`` and ``psi_override``.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import EvolutionSpec
from .errors import ConfigError
from .numerics import DEFAULT_TOL, Tolerances, parse_complex, parse_matrix

MODEL_KEYS = {
    "two_level": {"alpha", "beta", "e1", "e2"},
    "das_greenwood": {"r", "s", "t", "theta", "branch", "phi_phase"},
    "matrix": {"matrix"},
}
REQUIRED_KEYS = {
    "two_level": {"alpha", "beta", "e1", "e2"},
    "das_greenwood": {"r", "s", "t", "theta"},
    "matrix": {"matrix"},
}
SWEEPABLE = {
    "two_level": ("alpha", "beta"),
    "das_greenwood": ("r", "s", "t", "theta"),
}
COMMON_KEYS = {"model", "evolution", "tolerances", "scan", "psi_override", "output"}


@dataclass
class RunConfig:
    model: str
    params: dict = field(default_factory=dict)
    matrix: np.ndarray | None = None
    evolution: EvolutionSpec | None = None
    tolerances: Tolerances = DEFAULT_TOL
    scan: dict = field(default_factory=dict)
    psi_override: np.ndarray | None = None
    output: str | None = None
    mode: str | None = None


def _number(data: dict, key: str) -> float:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a real number, got {value!r}", field=key)
    if not math.isfinite(value):
        raise ConfigError("value must be finite", field=key)
    return float(value)


def _complex(data: dict, key: str) -> complex:
    try:
        return parse_complex(data[key])
    except ValueError as exc:
        raise ConfigError(str(exc), field=key) from None


def _matrix(value, key: str) -> np.ndarray:
    try:
        m = parse_matrix(value)
    except ValueError as exc:
        raise ConfigError(str(exc), field=key) from None
    if m.shape[0] != m.shape[1]:
        raise ConfigError(f"matrix must be square, got {m.shape}", field=key)
    return m


def _evolution(data) -> EvolutionSpec:
    if not isinstance(data, dict):
        raise ConfigError("must be an object", field="evolution")
    unknown = set(data) - {"c", "d", "t_start", "t_end", "n_steps"}
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", field="evolution")
    for key in ("c", "d"):
        if not isinstance(data.get(key), list):
            raise ConfigError("must be an array of complex numbers", field=f"evolution.{key}")
    try:
        c = [parse_complex(x) for x in data["c"]]
        d = [parse_complex(x) for x in data["d"]]
    except ValueError as exc:
        raise ConfigError(str(exc), field="evolution") from None
    kwargs = {}
    for key in ("t_start", "t_end"):
        if key in data:
            kwargs[key] = _number(data, key)
    if "n_steps" in data:
        n = data["n_steps"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise ConfigError("must be an integer", field="evolution.n_steps")
        kwargs["n_steps"] = n
    try:
        return EvolutionSpec(tuple(c), tuple(d), **kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc), field="evolution") from None


def _scan(data, model: str) -> dict:
    if not isinstance(data, dict) or not data:
        raise ConfigError("must be a non-empty object of swept parameters", field="scan")
    if model not in SWEEPABLE:
        raise ConfigError(f"scans are not supported for model '{model}'", field="scan")
    sweeps = {}
    for name, spec in data.items():
        key = f"scan.{name}"
        if name not in SWEEPABLE[model]:
            raise ConfigError(f"cannot sweep '{name}'; choose from {SWEEPABLE[model]}", field=key)
        if not isinstance(spec, dict) or set(spec) != {"min", "max", "count"}:
            raise ConfigError("expected {\"min\", \"max\", \"count\"}", field=key)
        lo, hi = _number(spec, "min"), _number(spec, "max")
        count = spec["count"]
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise ConfigError("count must be a positive integer", field=f"{key}.count")
        if hi < lo:
            raise ConfigError("max must not be below min", field=key)
        sweeps[name] = np.array([lo]) if lo == hi or count == 1 else np.linspace(lo, hi, count)
    return sweeps


def _tolerances(data) -> Tolerances:
    if not isinstance(data, dict):
        raise ConfigError("must be an object", field="tolerances")
    names = {f.name for f in dataclasses.fields(Tolerances)}
    changes = {}
    for key, value in data.items():
        if key not in names:
            raise ConfigError(f"unknown tolerance; choose from {sorted(names)}", field=f"tolerances.{key}")
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            raise ConfigError("must be a positive number", field=f"tolerances.{key}")
        changes[key] = type(getattr(DEFAULT_TOL, key))(value)
    return DEFAULT_TOL.replace(**changes)


def parse_config(data: dict, mode: str | None = None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("top level must be an object")
    model = data.get("model")
    if model not in MODEL_KEYS:
        raise ConfigError(f"must be one of {sorted(MODEL_KEYS)}", field="model")

    foreign = set(data) - COMMON_KEYS - MODEL_KEYS[model]
    if foreign:
        raise ConfigError(f"keys {sorted(foreign)} do not belong to model '{model}'")

    sweeps = _scan(data["scan"], model) if "scan" in data else {}
    missing = REQUIRED_KEYS[model] - set(data) - set(sweeps)
    if missing:
        raise ConfigError(f"missing required keys {sorted(missing)}", field="model")

    cfg = RunConfig(model=model, mode=mode, scan=sweeps)
    if model == "matrix":
        cfg.matrix = _matrix(data["matrix"], "matrix")
    elif model == "two_level":
        for key in ("alpha", "beta"):
            if key in data:
                cfg.params[key] = _number(data, key)
        for key in ("e1", "e2"):
            cfg.params[key] = _complex(data, key)
    else:
        for key in ("r", "s", "t", "theta", "phi_phase"):
            if key in data:
                cfg.params[key] = _number(data, key)
        branch = data.get("branch", "+")
        if branch not in ("+", "-"):
            raise ConfigError("must be '+' or '-'", field="branch")
        cfg.params["branch"] = branch

    if "evolution" in data:
        cfg.evolution = _evolution(data["evolution"])
    if "tolerances" in data:
        cfg.tolerances = _tolerances(data["tolerances"])
    if "psi_override" in data:
        cfg.psi_override = _matrix(data["psi_override"], "psi_override")
    if "output" in data:
        if not isinstance(data["output"], str):
            raise ConfigError("must be a string", field="output")
        cfg.output = data["output"]

    if mode == "evolve" and cfg.evolution is None:
        raise ConfigError("evolve needs an 'evolution' section", field="evolution")
    if mode == "scan" and not cfg.scan:
        raise ConfigError("scan needs a 'scan' section", field="scan")
    return cfg


def load_config(path, mode: str | None = None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, line=exc.lineno) from None
    return parse_config(data, mode)
