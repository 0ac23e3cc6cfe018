"""Serialization of command results to csv, json and plain tables.

Exact values (ints, Fractions) are written losslessly; Fractions become
"p/q" strings. Floats carry 12 significant digits.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

FORMAT_VERSION = 1
FLOAT_DIGITS = 12


@dataclass
class OutputEnvelope:
    command: str
    parameters: dict[str, Any]
    rows: list[dict[str, Any]] = field(default_factory=list)
    format_version: int = FORMAT_VERSION


def as_row(record: Any) -> dict[str, Any]:
    if isinstance(record, dict):
        return dict(record)
    if dataclasses.is_dataclass(record):
        return {f.name: getattr(record, f.name) for f in dataclasses.fields(record)}
    raise TypeError(f"cannot turn {type(record).__name__} into a row")


def _json_value(v: Any) -> Any:
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return float(format(v, f".{FLOAT_DIGITS}g"))
    if isinstance(v, (list, tuple, set, frozenset)):
        items = sorted(v) if isinstance(v, (set, frozenset)) else v
        return [_json_value(x) for x in items]
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if hasattr(v, "item"):  # numpy scalar
        return _json_value(v.item())
    return str(v)


def _text_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, f".{FLOAT_DIGITS}g")
    if isinstance(v, (list, tuple, set, frozenset)):
        items = sorted(v) if isinstance(v, (set, frozenset)) else v
        return ";".join(_text_value(x) for x in items)
    if hasattr(v, "item"):
        return _text_value(v.item())
    return str(v)


def _columns(rows: list[dict[str, Any]]) -> list[str]:
    cols: list[str] = []
    for row in rows:
        for k in row:
            if k not in cols:
                cols.append(k)
    return cols


def to_json(env: OutputEnvelope) -> str:
    payload = {
        "command": env.command,
        "format_version": env.format_version,
        "parameters": _json_value(env.parameters),
        "rows": [_json_value(r) for r in env.rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def to_csv(env: OutputEnvelope, header: list[str] | None = None) -> str:
    cols = header or _columns(env.rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if cols:
        writer.writerow(cols)
    for row in env.rows:
        writer.writerow([_text_value(row.get(c)) for c in cols])
    return buf.getvalue()


def to_table(env: OutputEnvelope) -> str:
    cols = _columns(env.rows)
    if not cols:
        return f"{env.command}: no rows\n"
    cells = [[_text_value(r.get(c)) for c in cols] for r in env.rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def emit(env: OutputEnvelope, fmt: str, header: list[str] | None = None) -> str:
    if fmt == "json":
        return to_json(env)
    if fmt == "csv":
        return to_csv(env, header)
    if fmt == "table":
        return to_table(env)
    raise ValueError(f"unknown format {fmt!r}")
