"""CSV and JSON table writers shared by the CLI.

CSV floats are printed with 17 significant digits.  JSON floats use Python's
shortest round-trip repr.  Both parse back to the same binary64 values.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Mapping, Sequence, TextIO

FORMATS = ("csv", "json")


def format_float(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def _plain(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    return float(v)


def to_csv(rows: Iterable[Mapping], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(_plain(row[c])) for c in columns])
    return buf.getvalue()


def to_json(rows: Iterable[Mapping], columns: Sequence[str]) -> str:
    data = [{c: _plain(row[c]) for c in columns} for row in rows]
    return json.dumps(data, indent=1) + "\n"


def render(rows: Iterable[Mapping], columns: Sequence[str], fmt: str) -> str:
    if fmt == "csv":
        return to_csv(rows, columns)
    if fmt == "json":
        return to_json(rows, columns)
    raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")


def write_table(rows: Iterable[Mapping], columns: Sequence[str], fmt: str, stream: TextIO) -> None:
    stream.write(render(rows, columns, fmt))


def parse_csv(text: str) -> list[dict]:
    """Read CSV written by ``to_csv``, converting numbers and booleans back."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for k, v in rec.items():
            if v in ("true", "false"):
                row[k] = v == "true"
                continue
            try:
                row[k] = int(v)
            except ValueError:
                try:
                    row[k] = float(v)
                except ValueError:
                    row[k] = v
        out.append(row)
    return out
