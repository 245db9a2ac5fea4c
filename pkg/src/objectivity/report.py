"""Tabular sweep output shared by the library and the command line."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field


def _cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


@dataclass
class SweepReport:
    """Column-named rows plus a header echoing the configuration that produced them."""

    header: dict
    columns: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(row[c]) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [{c: _json_value(row[c]) for c in self.columns} for row in self.rows]
        return json.dumps({"header": self.header, "columns": list(self.columns), "rows": rows}, indent=2) + "\n"
