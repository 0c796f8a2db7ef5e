"""CSV and JSON shaping for tables and reports.

All float output goes through 12-significant-digit formatting, enough to
round-trip the model values meaningfully while keeping files stable, and
line endings are fixed so identical inputs produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json

from .sweep import SweepTable

__all__ = [
    "format_number",
    "sweep_table_to_csv",
    "sweep_table_to_dict",
    "to_json",
]


def format_number(value: float) -> str:
    """12 significant digits; negative zero normalised."""
    text = f"{value:.12g}"
    return "0" if text == "-0" else text


def sweep_table_to_csv(table: SweepTable) -> str:
    """Header row then one row per grid point, parameter column first."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow((table.parameter,) + table.columns)
    for value, row in zip(table.grid, table.rows):
        writer.writerow([format_number(value)] + [format_number(v) for v in row])
    return out.getvalue()


def sweep_table_to_dict(table: SweepTable) -> dict:
    return {
        "parameter": table.parameter,
        "grid": list(table.grid),
        "columns": list(table.columns),
        "rows": [list(row) for row in table.rows],
        "in_domain": [list(row) for row in table.flags],
    }


def to_json(payload: dict) -> str:
    """Stable JSON: given key order, two-space indent, trailing newline."""
    return json.dumps(payload, indent=2) + "\n"
