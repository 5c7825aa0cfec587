"""Run reports and their CSV/JSON serialization.

A report is a set of named tables (labeled numeric columns), pass/fail
flags, the scenario name and the seed.  Serialization is byte-stable for a
fixed report: JSON keys are sorted and floats use Python's shortest
round-trip repr; CSV is RFC-4180 style (CRLF line endings, minimal
quoting), one file per table.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

__all__ = ["Table", "RunReport", "emit"]

Cell = float | int | str | bool


@dataclass(frozen=True)
class Table:
    """A named table of labeled columns over numeric/text rows."""

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[Cell, ...], ...]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"table {self.name!r}: row of width {len(row)} does not match "
                    f"{len(self.columns)} columns"
                )

    @staticmethod
    def build(name: str, columns: Sequence[str], rows: Sequence[Sequence[Cell]]) -> "Table":
        return Table(name, tuple(columns), tuple(tuple(r) for r in rows))


@dataclass
class RunReport:
    """Everything one scenario run produced."""

    scenario: str
    seed: int
    tables: dict[str, Table] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    wall_time: float = 0.0

    def add_table(self, table: Table) -> None:
        self.tables[table.name] = table

    @property
    def passed(self) -> bool:
        return all(self.flags.values())


def _csv_cell(value: Cell) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _table_to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _report_to_json(report: RunReport) -> str:
    payload = {
        "scenario": report.scenario,
        "seed": report.seed,
        "tables": {
            name: {"columns": list(t.columns), "rows": [list(r) for r in t.rows]}
            for name, t in report.tables.items()
        },
        "flags": dict(report.flags),
    }
    # wall time is deliberately excluded: serialized output stays byte-stable
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def emit(report: RunReport, format: str, destination=None) -> str:
    """Serialize ``report``; if ``destination`` is given, also write file(s).

    JSON writes one file.  CSV writes the first table at ``destination``
    and each further table at ``<stem>.<table_name>.csv``.  The primary
    serialized text is returned either way.
    """
    if format == "json":
        text = _report_to_json(report)
        if destination is not None:
            Path(destination).write_text(text, encoding="utf-8", newline="")
        return text
    if format != "csv":
        raise ValueError(f"unknown output format {format!r}")

    tables = list(report.tables.values())
    if not tables:
        tables = [Table.build("empty", (), ())]
    primary = _table_to_csv(tables[0])
    if destination is not None:
        dest = Path(destination)
        dest.write_text(primary, encoding="utf-8", newline="")
        for extra in tables[1:]:
            sibling = dest.with_name(f"{dest.stem}.{extra.name}{dest.suffix or '.csv'}")
            sibling.write_text(_table_to_csv(extra), encoding="utf-8", newline="")
    return primary
