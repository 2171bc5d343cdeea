"""Flat record types and their CSV/JSON serialisation.

A record is a frozen dataclass whose fields map positionally onto
``COLUMNS``. CSV floats are written with 17 significant digits so that a
write/read round trip is exact; ``None`` is written as an empty cell.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import fields
from pathlib import Path


class Record:
    COLUMNS: tuple[str, ...] = ()

    def values(self) -> list:
        return [getattr(self, f.name) for f in fields(self)]

    def as_dict(self) -> dict:
        return dict(zip(self.COLUMNS, self.values()))

    @classmethod
    def from_mapping(cls, row: dict) -> Record:
        kwargs = {}
        for col, f in zip(cls.COLUMNS, fields(cls)):
            kwargs[f.name] = _parse(row[col], str(f.type))
        return cls(**kwargs)


def _parse(value, annotation: str):
    if value is None or value == "":
        return None
    if annotation.startswith("int"):
        return int(value)
    if annotation.startswith("str"):
        return str(value)
    if annotation.startswith("bool"):
        return value if isinstance(value, bool) else value == "true"
    return float(value)


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render(records, fmt: str = "csv", columns: tuple[str, ...] | None = None) -> str:
    if columns is None:
        if not records:
            raise ValueError("columns are required to render an empty record list")
        columns = type(records[0]).COLUMNS
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([format_value(v) for v in rec.values()])
        return buf.getvalue()
    if fmt == "json":
        rows = [{c: _json_value(v) for c, v in zip(columns, rec.values())} for rec in records]
        return json.dumps(rows, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected csv or json")


def emit(records, fmt: str, path, columns: tuple[str, ...] | None = None) -> None:
    """Write records to ``path`` as CSV (header row first) or a JSON array."""
    text = render(records, fmt, columns)
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {fmt} output to {path}: {exc}") from exc


def read_records(path, fmt: str, record_type: type[Record]) -> list:
    text = Path(path).read_text()
    if fmt == "csv":
        rows = list(csv.DictReader(io.StringIO(text)))
    elif fmt == "json":
        rows = json.loads(text)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return [record_type.from_mapping(row) for row in rows]
