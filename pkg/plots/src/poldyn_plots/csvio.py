"""Reader for the poldyn CSV schema: '#' metadata lines, one header row."""

from __future__ import annotations

import math

import numpy as np


class SchemaError(ValueError):
    """Input file does not follow the expected CSV schema."""


def load(path):
    """Return (metadata dict, {column: float array})."""
    metadata = {}
    columns = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, _, value = body.partition(":")
                    metadata[key.strip()] = value.strip()
                continue
            if columns is None:
                columns = line.split(",")
                continue
            rows.append(line.split(","))
    if columns is None:
        raise SchemaError(f"{path}: no header row found")
    data = {}
    for j, name in enumerate(columns):
        try:
            data[name] = np.array(
                [float(r[j]) if r[j] != "nan" else math.nan for r in rows]
            )
        except (ValueError, IndexError) as exc:
            raise SchemaError(f"{path}: column {name!r} is not numeric") from exc
    return metadata, data


def require_columns(path, data, names):
    missing = [n for n in names if n not in data]
    if missing:
        raise SchemaError(f"{path}: missing required columns {', '.join(missing)}")


def meta_float(metadata, key):
    try:
        return float(metadata[key])
    except (KeyError, ValueError):
        return None
