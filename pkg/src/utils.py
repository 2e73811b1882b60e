import copy
import json
import hashlib

import yaml
import numpy as np

from fractions import Fraction
from typing import Any, Dict, Optional

from src.scalars.scalars import InputError

CONVENTIONS = ("corrected", "literal")

DEFAULT_CONFIG: Dict[str, Any] = {
    "limits": {
        "max_dim": 64,
        "max_group": 24,
        "max_units": 10 ** 6,
        "max_multiplier_dim": 12,
        "max_projective_unknowns": 512,
        "max_tensor_square": 1024,
    },
    "search": {
        "quaternion_height": 30,
        "elementary_combinations": True,
    },
    "miyashita": {
        "convention": "corrected",
    },
    "report": {
        "tool_version": "0.1.0",
    },
}


class ConfigError(InputError):
    """Unreadable or invalid configuration file."""


def _merge(base: Dict[str, Any], override: Dict[str, Any], path: str = "") -> Dict[str, Any]:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"Unknown config key: {where}", location=where)
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"Config section {where} must be a mapping", location=where)
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = value
    return out


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """
    Read a YAML config and fill missing keys from DEFAULT_CONFIG.

    Parameters:
    path: YAML file, or None for the defaults

    Returns:
    config: nested dict with every section present
    """
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)
    with open(path, "r") as stream:
        try:
            raw = yaml.safe_load(stream) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"Cannot parse config {path}: {exc}", location=path)
    if not isinstance(raw, dict):
        raise ConfigError(f"Config {path} must be a mapping", location=path)
    config = _merge(DEFAULT_CONFIG, raw)
    validate_config(config)
    return config


def validate_config(config: Dict[str, Any]):
    convention = config["miyashita"]["convention"]
    if convention not in CONVENTIONS:
        raise ConfigError(f"Unknown Miyashita convention {convention!r}",
                          location="miyashita.convention")
    for key, value in config["limits"].items():
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ConfigError(f"Limit {key} must be a positive integer, got {value!r}",
                              location=f"limits.{key}")


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy arrays, Fractions and tuples to JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return value


def canonical_json(value: Any) -> str:
    """Byte-stable JSON: sorted keys, no whitespace."""
    return json.dumps(to_jsonable(value), sort_keys=True, separators=(",", ":"))


def sha256_of(value: Any) -> str:
    return hashlib.sha256(canonical_json(value).encode("utf-8")).hexdigest()
