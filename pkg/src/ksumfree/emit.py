"""CSV and JSON documents for result tables."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional, Sequence

SCHEMA_VERSION = 1


def rational_fields(prefix: str, value: Optional[Fraction]) -> dict[str, Optional[int]]:
    """Split a rational into ``<prefix>_num`` / ``<prefix>_den`` integer fields."""
    if value is None:
        return {f"{prefix}_num": None, f"{prefix}_den": None}
    return {f"{prefix}_num": value.numerator, f"{prefix}_den": value.denominator}


def point_fields(prefix: str, p: Sequence[int]) -> dict[str, int]:
    return {f"{prefix}{i}": c for i, c in enumerate(p, start=1)}


def _columns(rows: Sequence[Mapping[str, Any]], columns: Optional[Sequence[str]]) -> list[str]:
    if columns is not None:
        cols = list(columns)
    elif rows:
        cols = list(rows[0])
    else:
        cols = []
    for row in rows:
        if list(row) != cols:
            raise ValueError(f"row schema {list(row)} differs from {cols}")
    return cols


def _csv_cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        raise TypeError("rationals must be split with rational_fields before emitting")
    return value


def emit_csv(rows: Iterable[Mapping[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    rows = list(rows)
    cols = _columns(rows, columns)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    if cols:
        writer.writerow(cols)
    for row in rows:
        writer.writerow([_csv_cell(row[c]) for c in cols])
    return buf.getvalue()


def emit_json(
    rows: Iterable[Mapping[str, Any]],
    columns: Optional[Sequence[str]] = None,
    extra: Optional[Mapping[str, Any]] = None,
) -> str:
    rows = [dict(r) for r in rows]
    _columns(rows, columns)
    for row in rows:
        for v in row.values():
            if isinstance(v, (Fraction, float)):
                raise TypeError("machine output carries no floats or Fractions")
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "rows": rows}
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"
