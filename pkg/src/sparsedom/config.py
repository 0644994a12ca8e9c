"""Run configuration: one JSON document validated against a closed schema.

Unknown keys anywhere are errors.  Every field is optional; missing fields
take the defaults below, and command-line flags override the file.
"""
from __future__ import annotations

import copy
import json
from pathlib import Path

import jsonschema

__all__ = ["SCHEMA", "DEFAULTS", "ConfigError", "load_config", "validate_config", "merge_config"]


class ConfigError(ValueError):
    pass


_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_nums = {"type": "array", "items": _num, "minItems": 1}
_poss = {"type": "array", "items": _pos, "minItems": 1}


def _obj(props: dict, required: list[str] | None = None) -> dict:
    out = {"type": "object", "properties": props, "additionalProperties": False}
    if required:
        out["required"] = required
    return out


_FIELD = _obj({
    "kind": {"enum": ["bump", "indicator", "noise", "csv"]},
    "center": {"oneOf": [_num, _nums]},
    "radius": _pos,
    "lo": {"oneOf": [_num, _nums]},
    "hi": {"oneOf": [_num, _nums]},
    "seed": {"type": "integer", "minimum": 0},
    "path": {"type": "string"},
}, ["kind"])

_WEIGHT = _obj({
    "name": {"type": "string"},
    "kind": {"enum": ["one", "power", "csv"]},
    "a": _num,
    "center": {"oneOf": [_num, _nums]},
    "path": {"type": "string"},
}, ["kind"])

SCHEMA = _obj({
    "grid": _obj({"n": {"enum": [1, 2]}, "depth": {"type": "integer", "minimum": 2, "maximum": 16}}),
    "kernel": {"type": "string"},
    "m": {"type": "integer", "minimum": 0, "maximum": 3},
    "f": _FIELD,
    "weights": {"type": "array", "items": _WEIGHT, "minItems": 1},
    "young": {"type": "string"},
    "checks": _obj({
        "fs": _obj({
            "eps": _poss,
            "variant": {"type": "array", "items": {"enum": ["loglog", "log_eps", "weak", "a1"]},
                        "minItems": 1},
            "m": {"type": "array", "items": {"type": "integer", "minimum": 0, "maximum": 3},
                  "minItems": 1},
            "lambdas": {"type": "integer", "minimum": 1},
        }),
        "cf": _obj({"p": _poss, "m": {"type": "array", "items": {"type": "integer", "minimum": 0,
                                                              "maximum": 3}, "minItems": 1}}),
        "sharp": _obj({"delta": _pos, "eps": _pos}),
        "lemmas": _obj({"names": {"type": "array", "items": {"type": "string"}},
                        "draws": {"type": "integer", "minimum": 1}}),
        "sparse": _obj({"max_alpha": _pos}),
    }),
    "quad": _obj({
        "m": {"type": "integer", "minimum": 0},
        "l1": {"type": "integer", "minimum": 0},
        "l2": {"type": "integer", "minimum": 0},
        "eps": _poss,
        "r": _pos,
        "n": {"type": "integer", "minimum": 1},
        "terms": {"type": "integer", "minimum": 0},
        "phi": {"type": "string"},
    }),
    "luxemburg": _obj({
        "cube": _obj({"lattice": {"type": "integer", "minimum": 0},
                      "level": {"type": "integer", "minimum": 0},
                      "index": {"type": "array", "items": {"type": "integer"}, "minItems": 1}},
                     ["level", "index"]),
        "weight": {"type": "integer", "minimum": 0},
    }),
    "seed": {"type": "integer", "minimum": 0},
    "threads": {"type": "integer", "minimum": 1},
    "out": {"type": "string"},
})

DEFAULTS = {
    "grid": {"n": 1, "depth": 10},
    "kernel": None,
    "m": 1,
    "f": {"kind": "bump"},
    "weights": [{"kind": "one"}, {"kind": "power", "a": 0.5}, {"kind": "power", "a": -0.5}],
    "young": "llog:alpha=1",
    "quad": {"m": 1, "l1": 1, "l2": 1, "eps": [0.5, 0.25, 0.125, 0.0625], "n": 1},
    "luxemburg": {"cube": {"lattice": 0, "level": 2, "index": [1]}},
    "seed": 0,
    "threads": None,
    "out": "out",
}

CHECK_DEFAULTS = {
    "fs": {"eps": [0.5, 0.25, 0.125], "variant": ["loglog"], "m": [1, 2], "lambdas": 32},
    "cf": {"p": [0.5, 1.0, 2.0, 3.0], "m": [0, 1]},
    "sharp": {"delta": 0.25, "eps": 0.5},
    "lemmas": {"draws": 1000},
    "sparse": {},
}


def validate_config(doc) -> None:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from None


def load_config(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    validate_config(doc)
    return doc


def merge_config(doc: dict | None) -> dict:
    """Defaults overlaid with ``doc`` (one level deep for objects)."""
    cfg = copy.deepcopy(DEFAULTS)
    for k, v in (doc or {}).items():
        if isinstance(v, dict) and isinstance(cfg.get(k), dict):
            cfg[k] = {**cfg[k], **copy.deepcopy(v)}
        else:
            cfg[k] = copy.deepcopy(v)
    if "checks" in (doc or {}):
        cfg["checks"] = {k: {**CHECK_DEFAULTS[k], **v} for k, v in doc["checks"].items()}
    else:
        cfg["checks"] = None
    return cfg
