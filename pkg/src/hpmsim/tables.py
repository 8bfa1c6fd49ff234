"""Result tables and their CSV/JSON serialisation.

CSV layout::

    # table: efield
    # scenario_hash: 3f0c...
    range_m [m],efield_vpm [V/m]
    20.0,494.678...

JSON layout: ``{"metadata": {...}, "columns": [{"name", "unit"}], "rows": [[...]]}``.
Floats are written with ``repr`` (shortest exact round trip); NaN is ``nan``
in CSV and ``null`` in JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class Column:
    name: str
    unit: str

    @property
    def header(self) -> str:
        return f"{self.name} [{self.unit}]"


@dataclass
class ResultTable:
    name: str
    columns: list[Column]
    rows: list[list] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.metadata = {str(k): str(v) for k, v in self.metadata.items()}
        if not re.fullmatch(r"[A-Za-z0-9_.-]+", self.name):
            raise ValueError(f"table name {self.name!r} is not an identifier")
        for c in self.columns:
            if not c.unit:
                raise ValueError(f"column {c.name!r} has no unit")
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"table {self.name}: row {i} has {len(row)} cells, expected {width}")

    @classmethod
    def from_records(cls, name: str, spec: list[tuple[str, str, str]], records, metadata=None) -> "ResultTable":
        """Build from dicts; ``spec`` lists ``(column, unit, record key)``."""
        columns = [Column(c, u) for c, u, _ in spec]
        rows = [[_cell(r[key]) for _, _, key in spec] for r in records]
        return cls(name, columns, rows, dict(metadata or {}))

    def column(self, name: str) -> list:
        i = [c.name for c in self.columns].index(name)
        return [row[i] for row in self.rows]

    def records(self) -> list[dict]:
        names = [c.name for c in self.columns]
        return [dict(zip(names, row)) for row in self.rows]


def _cell(value):
    if isinstance(value, bool):
        return int(value)
    if hasattr(value, "item"):  # numpy scalar
        value = value.item()
        if isinstance(value, bool):
            return int(value)
    return value


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


_INT = re.compile(r"[+-]?\d+")


def _parse(text: str):
    if _INT.fullmatch(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def to_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    meta = {"table": table.name, **table.metadata}
    for key, value in meta.items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([c.header for c in table.columns])
    for row in table.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return v


def to_json(table: ResultTable) -> str:
    doc = {
        "metadata": {"table": table.name, **table.metadata},
        "columns": [{"name": c.name, "unit": c.unit} for c in table.columns],
        "rows": [[_json_value(v) for v in row] for row in table.rows],
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def emit(table: ResultTable, fmt: str = "csv") -> bytes:
    if fmt == "csv":
        return to_csv(table).encode()
    if fmt == "json":
        return to_json(table).encode()
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")


def write_table(table: ResultTable, path: str | Path, fmt: str = "csv") -> Path:
    path = Path(path)
    try:
        path.write_bytes(emit(table, fmt))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


_HEADER = re.compile(r"^(.*) \[(.*)\]$")


def read_csv(text: str) -> ResultTable:
    """Inverse of :func:`to_csv`."""
    meta: dict = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# ") and not body:
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        else:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    columns = []
    for h in header:
        m = _HEADER.match(h)
        if not m:
            raise ValueError(f"malformed column header {h!r}")
        columns.append(Column(m.group(1), m.group(2)))
    rows = [[_parse(c) for c in row] for row in reader]
    name = meta.pop("table")
    return ResultTable(name, columns, rows, meta)


def read_json(text: str) -> ResultTable:
    doc = json.loads(text)
    meta = dict(doc["metadata"])
    name = meta.pop("table")
    rows = [[math.nan if v is None else v for v in row] for row in doc["rows"]]
    return ResultTable(name, [Column(c["name"], c["unit"]) for c in doc["columns"]], rows, meta)
