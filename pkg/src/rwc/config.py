"""Run configuration: a versioned JSON document with command-line overrides."""

from dataclasses import dataclass, field
import copy
import json

import jsonschema
import numpy as np

__all__ = ["ConfigError", "RunConfig", "DEFAULTS", "SCHEMA", "load_config"]

VERSION = 1

DEFAULTS = {
    "version": VERSION,
    "bath": {"alpha": 0.05, "omega_c": 5.0, "temperatures": [0.0, 1.0, 5.0]},
    "grid": {"t_max": 30.0, "steps": 600},
    "initial_state": {"population": "excited", "coherence": "plus"},
    "tolerances": {"abs_tol": 1e-10, "rel_tol": 1e-8},
    "output": {"path": "out", "format": "csv"},
    "backend": "map",
    "frame": "interaction",
    "workers": 1,
}

_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_STATES = ["excited", "ground", "plus", "minus", "plus_y", "minus_y"]

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["version"],
    "properties": {
        "version": {"const": VERSION},
        "bath": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "alpha": _POSITIVE,
                "omega_c": _POSITIVE,
                "temperatures": {
                    "type": "array", "minItems": 1,
                    "items": {"type": "number", "minimum": 0},
                },
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_max": _POSITIVE,
                "steps": {"type": "integer", "minimum": 2},
                "times": {"type": "array", "minItems": 2, "items": {"type": "number", "minimum": 0}},
            },
        },
        "initial_state": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "population": {"enum": _STATES},
                "coherence": {"enum": _STATES},
            },
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"abs_tol": _POSITIVE, "rel_tol": _POSITIVE},
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "path": {"type": "string", "minLength": 1},
                "format": {"enum": ["csv", "json"]},
            },
        },
        "backend": {"enum": ["map", "ode"]},
        "frame": {"enum": ["interaction", "lab"]},
        "workers": {"type": "integer", "minimum": 1},
    },
}

STATE_VECTORS = {
    "excited": [0, 1],
    "ground": [1, 0],
    "plus": [1, 1],
    "minus": [1, -1],
    "plus_y": [1, 1j],
    "minus_y": [1, -1j],
}


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


def _merge(base, override):
    out = copy.deepcopy(base)
    for key, value in override.items():
        if value is None:
            out.pop(key, None)
        elif isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


@dataclass(frozen=True)
class RunConfig:
    alpha: float
    omega_c: float
    temperatures: tuple
    times: tuple
    population_state: str = "excited"
    coherence_state: str = "plus"
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    output_path: str = "out"
    output_format: str = "csv"
    backend: str = "map"
    frame: str = "interaction"
    workers: int = 1
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_dict(cls, doc):
        """Validate a (possibly partial) document merged over the defaults."""
        merged = _merge(DEFAULTS, doc)
        validator = jsonschema.Draft202012Validator(SCHEMA)
        errors = sorted(validator.iter_errors(merged), key=lambda e: list(e.absolute_path))
        if errors:
            err = errors[0]
            where = ".".join(str(p) for p in err.absolute_path) or "<root>"
            raise ConfigError(f"config field '{where}': {err.message}")
        grid = merged["grid"]
        if "times" in grid:
            times = np.asarray(grid["times"], dtype=float)
            if np.any(np.diff(times) <= 0):
                raise ConfigError("config field 'grid.times': must be strictly increasing")
        else:
            times = np.linspace(0.0, grid["t_max"], grid["steps"] + 1)
        bath = merged["bath"]
        return cls(
            alpha=float(bath["alpha"]),
            omega_c=float(bath["omega_c"]),
            temperatures=tuple(float(t) for t in bath["temperatures"]),
            times=tuple(float(t) for t in times),
            population_state=merged["initial_state"]["population"],
            coherence_state=merged["initial_state"]["coherence"],
            abs_tol=float(merged["tolerances"]["abs_tol"]),
            rel_tol=float(merged["tolerances"]["rel_tol"]),
            output_path=merged["output"]["path"],
            output_format=merged["output"]["format"],
            backend=merged["backend"],
            frame=merged["frame"],
            workers=int(merged["workers"]),
            raw=merged,
        )


def load_config(path=None, overrides=None):
    """Read ``path`` (JSON), apply ``overrides`` (nested dict) and validate."""
    doc = {"version": VERSION}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
    if overrides:
        doc = _merge(doc, overrides)
    return RunConfig.from_dict(doc)
