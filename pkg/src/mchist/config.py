"""Versioned JSON experiment configuration with strict key checking."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass

import jsonschema

from .errors import ConfigError
from .phase import SpectralPoint

SCHEMA_VERSION = 1

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_pair = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}
_gen = {
    "type": "object", "additionalProperties": False,
    "required": ["zeta", "C"],
    "properties": {"zeta": _pair, "C": _pair,
                   "kind": {"enum": ["ON_CIRCLE", "OFF_CIRCLE"]}},
}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "seed": {"type": "integer"},
        "out": {"type": "string"},
        "profile": {"oneOf": [
            {"type": "object", "additionalProperties": False, "required": ["kind"],
             "properties": {"kind": {"const": "gaussian"}, "A": _num, "w": _pos}},
            {"type": "object", "additionalProperties": False, "required": ["kind", "path"],
             "properties": {"kind": {"const": "file"}, "path": {"type": "string"}}},
            {"type": "object", "additionalProperties": False, "required": ["kind"],
             "properties": {"kind": {"const": "zero"}}},
            {"type": "object", "additionalProperties": False, "required": ["kind", "generators"],
             "properties": {"kind": {"const": "soliton"},
                            "generators": {"type": "array", "items": _gen},
                            "t": _num}},
        ]},
        "spectrum": {"type": "array", "items": _gen},
        "grids": {"type": "object", "additionalProperties": False, "properties": {
            "X": _pos, "h": _pos, "z_n": {"type": "integer", "minimum": 8},
            "z_max": _pos, "L": _pos, "x0": _num, "n": {"type": "integer", "minimum": 4},
            "dt": _pos, "dy": _pos}},
        "ctx": {"type": "object", "additionalProperties": False, "properties": {
            "xi": _num, "delta0": _pos, "rho": _pos}},
        "times": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
        "x_grid": {"type": "object", "additionalProperties": False,
                   "required": ["start", "stop", "num"], "properties": {
                       "start": _num, "stop": _num, "num": {"type": "integer", "minimum": 2}}},
        "region": {"type": "array", "items": _num, "minItems": 4, "maxItems": 4},
        "signature": {"type": "object", "additionalProperties": False, "properties": {
            "window": {"type": "array", "items": _num, "minItems": 4, "maxItems": 4},
            "n": {"type": "integer", "minimum": 2}}},
        "sectors": {"type": "object", "additionalProperties": False, "properties": {
            "phi": _pos, "samples": {"type": "integer", "minimum": 1}, "radius": _pos}},
        "compare": {"type": "object", "additionalProperties": False, "properties": {
            "half_width_frac": _pos}},
        "tolerances": {"type": "object", "additionalProperties": False, "properties": {
            "ode_rtol": _pos, "ode_atol": _pos, "quad_gap": _pos, "sym_tol": _pos,
            "unitarity_tol": _pos, "a_min": _pos, "imag_tol": _pos}},
    },
}

DEFAULTS = {
    "schema_version": SCHEMA_VERSION,
    "seed": 0,
    "out": "out",
    "profile": {"kind": "gaussian", "A": 0.5, "w": 1.0},
    "spectrum": [],
    "grids": {"X": 6.5, "h": 0.01, "z_n": 200, "z_max": 50.0, "L": 200.0, "x0": -100.0,
              "n": 4096, "dt": 0.005, "dy": 0.01},
    "ctx": {"xi": -0.4, "delta0": 0.05, "rho": 0.2},
    "times": [20.0, 40.0, 80.0],
    "x_grid": {"start": -20.0, "stop": 20.0, "num": 401},
    "region": None,
    "signature": {"window": [-3.0, 3.0, -3.0, 3.0], "n": 201},
    "sectors": {"phi": 0.19634954084936207, "samples": 100000, "radius": 10.0},
    "compare": {"half_width_frac": 0.05},
    "tolerances": {"ode_rtol": 1e-11, "ode_atol": 1e-13, "quad_gap": 0.05, "sym_tol": 1e-6,
                   "unitarity_tol": 1e-6, "a_min": 1e-8, "imag_tol": 1e-10},
}


def _merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k != "profile":
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


@dataclass
class ExperimentConfig:
    data: dict

    def __getitem__(self, key):
        return self.data[key]

    @property
    def seed(self) -> int:
        return int(self.data["seed"])

    def generators(self, key: str = "spectrum"):
        gens = self.data["profile"]["generators"] if key == "profile" else self.data["spectrum"]
        out = []
        for g in gens:
            z = complex(*g["zeta"])
            c = complex(*g["C"])
            try:
                out.append(SpectralPoint(z, c, g["kind"]) if "kind" in g else SpectralPoint.auto(z, c))
            except ValueError as e:
                raise ConfigError(f"invalid generator {g}: {e}") from e
        return out


def validate(raw: dict) -> ExperimentConfig:
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as e:
        loc = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"config error at {loc}: {e.message}") from None
    cfg = _merge(DEFAULTS, raw)
    g = cfg["grids"]
    if not g["h"] < g["X"]:
        raise ConfigError("grids.h must be smaller than grids.X")
    if g["n"] & (g["n"] - 1):
        raise ConfigError("grids.n must be a power of two")
    if g["z_n"] % 2:
        raise ConfigError("grids.z_n must be even")
    if not 0 < cfg["ctx"]["rho"] < 0.25:
        raise ConfigError("ctx.rho must lie in (0, 1/4)")
    return ExperimentConfig(cfg)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}: invalid JSON: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    return validate(raw)
