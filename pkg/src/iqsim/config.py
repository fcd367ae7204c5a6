"""Flat ``key = value`` config files with sections and a strict schema.

Format::

    # comment
    [section]
    key = value        # trailing comments allowed

Unknown sections or keys are hard errors carrying the offending line
number, as are type mismatches and missing required keys.  Temperatures
may be given as ``T`` (converted to beta = 1/T; ``T = 0`` means zero
temperature) or directly as ``beta``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

__all__ = ["ConfigError", "Field", "parse_config", "beta_from"]


class ConfigError(ValueError):
    """Invalid configuration; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Field:
    """One schema entry: a converter plus requiredness and default."""

    convert: object
    required: bool = False
    default: object = None


def as_float(text):
    return float(text)


def as_int(text):
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def as_str(text):
    return text


def as_bool(text):
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def as_ints(text):
    return tuple(as_int(part.strip()) for part in text.split(",") if part.strip())


def as_floats(text):
    return tuple(float(part.strip()) for part in text.split(",") if part.strip())


def as_strs(text):
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _match_field(section_schema, key):
    if key in section_schema:
        return section_schema[key]
    for pattern, field in section_schema.items():
        if isinstance(pattern, re.Pattern) and pattern.fullmatch(key):
            return field
    return None


def parse_config(text, schema):
    """Parse and validate config text against ``schema``.

    ``schema`` maps section name -> {key or compiled regex -> Field}.
    Returns {section: {key: converted value}} with defaults filled in.
    """
    values = {section: {} for section in schema}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in schema:
                raise ConfigError(f"unknown section [{name}]", lineno)
            current = name
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}",
                              lineno)
        if current is None:
            raise ConfigError("key outside any [section]", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        field = _match_field(schema[current], key)
        if field is None:
            raise ConfigError(f"unknown key {key!r} in [{current}]", lineno)
        if key in values[current]:
            raise ConfigError(f"duplicate key {key!r} in [{current}]", lineno)
        try:
            values[current][key] = field.convert(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno) from None

    for section, fields in schema.items():
        for key, field in fields.items():
            if isinstance(key, re.Pattern):
                continue
            if key not in values[section]:
                if field.required:
                    raise ConfigError(
                        f"missing required key {key!r} in [{section}]")
                if field.default is not None:
                    values[section][key] = field.default
    return values


def beta_from(section, *, prefix=""):
    """Inverse temperature from ``{prefix}T`` or ``{prefix}beta`` keys.

    ``T = 0`` maps to the zero-temperature flag (beta = inf).  Returns
    None if neither key is present.
    """
    t_key, b_key = prefix + "T", prefix + "beta"
    if t_key in section and b_key in section:
        raise ConfigError(f"give either {t_key!r} or {b_key!r}, not both")
    if b_key in section:
        return float(section[b_key])
    if t_key in section:
        T = float(section[t_key])
        if T < 0:
            raise ConfigError(f"{t_key!r} must be nonnegative")
        return math.inf if T == 0 else 1.0 / T
    return None
