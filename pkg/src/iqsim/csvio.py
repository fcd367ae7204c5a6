"""Deterministic CSV output with a self-describing header.

Layout::

    # iqsim-csv v1
    # key = value          (full parameter echo, one per line)
    col1,col2,...
    ...data rows...

Floats are written with 12 significant digits; identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import math

__all__ = ["SCHEMA_LINE", "format_value", "write_csv", "read_csv"]

SCHEMA_LINE = "# iqsim-csv v1"


def format_value(value):
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.12g}"
    return str(value)


def write_csv(path, columns, rows, params):
    """Write rows (sequences matching ``columns``) with a parameter echo."""
    lines = [SCHEMA_LINE]
    for key, value in params.items():
        lines.append(f"# {key} = {format_value(value)}")
    lines.append(",".join(columns))
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row width {len(row)} != {len(columns)} columns")
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path):
    """Read back an iqsim CSV: (params dict, columns, list of row tuples)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != SCHEMA_LINE:
        raise ValueError(f"{path} does not carry the '{SCHEMA_LINE}' header")
    params = {}
    idx = 1
    while idx < len(lines) and lines[idx].startswith("#"):
        body = lines[idx][1:].strip()
        if "=" in body:
            key, _, value = body.partition("=")
            params[key.strip()] = value.strip()
        idx += 1
    if idx >= len(lines):
        raise ValueError(f"{path} has no column header")
    columns = lines[idx].split(",")
    rows = [tuple(line.split(",")) for line in lines[idx + 1:] if line]
    return params, columns, rows
