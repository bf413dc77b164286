"""Plain tables and their byte-stable CSV / JSON encodings.

Every float is written with 10 significant digits; JSON carries the same
number as CSV (the JSON value is the float parsed back from the CSV text).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field


@dataclass
class Table:
    name: str
    columns: list
    rows: list = field(default_factory=list)

    def add(self, **values):
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns {sorted(unknown)} for table {self.name}")
        self.rows.append([values.get(c) for c in self.columns])

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".10g")
    return str(v)


def _json_value(v):
    if isinstance(v, float):
        if not math.isfinite(v):
            return format_value(v)
        return float(format_value(v))
    return v


def to_csv(tables: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    multi = len(tables) > 1
    for i, t in enumerate(tables):
        if multi:
            if i:
                buf.write("\n")
            buf.write(f"# {t.name}\n")
        writer.writerow(t.columns)
        for row in t.rows:
            writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def to_json(tables: list, command: str = "") -> str:
    doc = {
        "command": command,
        "tables": [
            {"name": t.name, "columns": list(t.columns), "rows": [[_json_value(v) for v in r] for r in t.rows]}
            for t in tables
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def _parse_cell(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def read_csv(text: str) -> list:
    """Inverse of :func:`to_csv` (cells come back as int / float / bool / str / None)."""
    blocks, name, lines = [], "table", []
    for line in text.splitlines():
        if line.startswith("# "):
            if lines:
                blocks.append((name, lines))
            name, lines = line[2:], []
        elif line:
            lines.append(line)
    if lines:
        blocks.append((name, lines))
    tables = []
    for name, lines in blocks:
        rows = list(csv.reader(lines))
        tables.append(Table(name, rows[0], [[_parse_cell(c) for c in r] for r in rows[1:]]))
    return tables


def read_json(text: str) -> list:
    doc = json.loads(text)
    return [Table(t["name"], t["columns"], t["rows"]) for t in doc["tables"]]
