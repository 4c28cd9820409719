"""
YAML scenario files, dotted overrides and (de)serialization of
:class:`~cronav.sim.ScenarioConfig`.

A scenario file is a mapping whose keys mirror the config dataclasses::

    name: deployment-A-LeO
    mode: closed_loop
    observer: {kind: levant, tuning: adaptive}
    sensor: {sigma_y: 1.0e-2, interpretation: std}

Missing keys take their dataclass defaults.  Errors carry the file line of
the offending key where one is known.
"""

from __future__ import annotations

import dataclasses
import types
import typing
from pathlib import Path

import yaml

from .errors import ConfigError
from .sim import ScenarioConfig


def _is_dataclass_type(tp) -> bool:
    return isinstance(tp, type) and dataclasses.is_dataclass(tp)


def _encode(value):
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _encode(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, (tuple, list)):
        return [_encode(v) for v in value]
    return value


def config_to_dict(cfg: ScenarioConfig) -> dict:
    """Plain nested dict of every field (fully defaulted)."""
    return _encode(cfg)


def _coerce(value, tp, path: str):
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin in (typing.Union, types.UnionType):
        if value is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)]
        return _coerce(value, inner[0], path)
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{path}: expected a number, got {value!r}") from None
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return value
    if tp is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{path}: expected true/false, got {value!r}")
        return value
    if tp is str:
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected a string, got {value!r}")
        return value
    if tp is tuple or origin is tuple:
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{path}: expected a list, got {value!r}")
        return tuple(_coerce(v, float, f"{path}[{i}]") for i, v in enumerate(value))
    if _is_dataclass_type(tp):
        return _build(tp, value, path)
    return value


def _build(cls, data, path: str = ""):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path or '<root>'}: expected a mapping, got {type(data).__name__}")
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls) if f.init}
    unknown = sorted(set(data) - names)
    if unknown:
        where = f"{path}." if path else ""
        raise ConfigError(f"unknown key {where}{unknown[0]!s} (valid: {', '.join(sorted(names))})")
    kwargs = {}
    for key, value in data.items():
        sub = f"{path}.{key}" if path else key
        kwargs[key] = _coerce(value, hints[key], sub)
    try:
        return cls(**kwargs)
    except ConfigError as exc:
        raise ConfigError(f"{path or '<root>'}: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path or '<root>'}: {exc}") from None


def config_from_dict(data: dict) -> ScenarioConfig:
    return _build(ScenarioConfig, data)


# ------------------------------------------------------------------ overrides


def parse_override(text: str) -> tuple[list[str], object]:
    """``'sensor.sigma_y=0'`` -> ``(['sensor', 'sigma_y'], 0)``; the value is YAML."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form key=value")
    key, raw = text.split("=", 1)
    keys = key.strip().split(".")
    if not all(keys):
        raise ConfigError(f"override {text!r} has an empty key segment")
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError as exc:
        raise ConfigError(f"override {text!r}: cannot parse value ({exc})") from None
    return keys, value


def apply_overrides(data: dict, overrides) -> dict:
    """Return a copy of ``data`` with each ``key.sub=value`` applied."""
    out = _deepcopy(data)
    for text in overrides or ():
        keys, value = parse_override(text)
        node = out
        for k in keys[:-1]:
            nxt = node.get(k)
            if nxt is None:
                nxt = node[k] = {}
            elif not isinstance(nxt, dict):
                raise ConfigError(f"override {text!r}: {k} is not a section")
            node = nxt
        node[keys[-1]] = value
    return out


def _deepcopy(data):
    if isinstance(data, dict):
        return {k: _deepcopy(v) for k, v in data.items()}
    if isinstance(data, list):
        return [_deepcopy(v) for v in data]
    return data


# ----------------------------------------------------------------- YAML files


def _key_lines(node, prefix: str = "", out: dict | None = None) -> dict:
    """Map dotted key paths to 1-based source lines from a composed YAML node."""
    out = {} if out is None else out
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            path = f"{prefix}.{k.value}" if prefix else str(k.value)
            out[path] = k.start_mark.line + 1
            _key_lines(v, path, out)
    return out


def _line_for(message: str, lines: dict) -> int | None:
    best = None
    for path, line in lines.items():
        if path in message and (best is None or len(path) > len(best[0])):
            best = (path, line)
    return best[1] if best else None


def parse_yaml(text: str, source: str = "<string>") -> tuple[dict, dict]:
    """Parse YAML text into ``(data, key_lines)``; syntax errors report their line."""
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        line = mark.line + 1 if mark is not None else "?"
        raise ConfigError(f"{source}:{line}: {exc.problem}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{source}:1: top level must be a mapping")
    return data, _key_lines(node)


def load_config(path, overrides=(), seed: int | None = None) -> tuple[ScenarioConfig, dict]:
    """Load, override and validate a scenario file.

    Returns the config and the raw (post-override) mapping.  Validation
    errors are re-raised as :class:`ConfigError` prefixed with ``file:line``.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from None
    data, lines = parse_yaml(text, str(path))
    data = apply_overrides(data, overrides)
    if seed is not None:
        data["seed"] = seed
    try:
        return config_from_dict(data), data
    except ConfigError as exc:
        line = _line_for(str(exc), lines)
        prefix = f"{path}:{line}" if line else str(path)
        raise ConfigError(f"{prefix}: {exc}") from None


def dump_config(cfg: ScenarioConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False)
