"""Deterministic CSV/JSON emission.

Every file starts with '#'-prefixed metadata lines (tool version, config
hash, T_eff convention, anything command-specific), then a header row.
Floats are serialized with repr() so identical inputs give identical
bytes on any platform with IEEE doubles.
"""

from __future__ import annotations

import json
import math
import os

import numpy as np

from . import __version__


def format_cell(value) -> str:
    # numpy scalars repr as np.float64(...) under numpy >= 2; strip the
    # wrapper so cells stay plain numbers
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        return repr(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def standard_metadata(config_hash: str | None, teff_convention: str, **extra) -> dict:
    meta = {"tool": f"kerrheat {__version__}"}
    if config_hash is not None:
        meta["config_sha256"] = config_hash
    meta["t_eff_convention"] = teff_convention
    meta.update(extra)
    return meta


def write_csv(path: str, meta: dict, columns: list[str], rows) -> None:
    """Rows are sequences matching `columns`.  The content is fully
    materialized before the file is opened, so failed computations never
    leave partial files behind."""
    lines = [f"# {key} = {format_cell(value)}" for key, value in meta.items()]
    lines.append(",".join(columns))
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row width {len(row)} != header width {len(columns)}")
        lines.append(",".join(format_cell(v) for v in row))
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _json_safe(value):
    """Strict-JSON payload: numpy scalars to Python ones, non-finite to null."""
    if isinstance(value, dict):
        return {key: _json_safe(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def write_json(path: str, payload: dict) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_json_safe(payload), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def read_csv(path: str) -> tuple[dict, list[str], list[list[str]]]:
    """Inverse of write_csv: (metadata, columns, raw string rows)."""
    meta: dict = {}
    columns: list[str] = []
    rows: list[list[str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            if not columns:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    return meta, columns, rows
