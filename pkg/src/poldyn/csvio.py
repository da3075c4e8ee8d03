"""Deterministic CSV emission.

Every file carries '#'-prefixed metadata lines (package version, config
hash, column units) before a single header row. Floats are written with
repr, i.e. shortest round-trip precision, so identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import math

from . import __version__


def _fmt(value):
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_csv(path, columns, rows, metadata=None):
    """Write rows (iterable of sequences) under '#' metadata and one header."""
    lines = [f"# poldyn {__version__}"]
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}: {_fmt(value)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_csv(path):
    """Read back a file written by write_csv: (metadata, columns, rows)."""
    metadata, columns, rows = {}, None, []
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
    return metadata, columns or [], rows
