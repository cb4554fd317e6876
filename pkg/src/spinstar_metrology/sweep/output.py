"""CSV and JSON emitters for flat result tables.

Floats are written with ``repr`` (shortest round-trip form) so identical
inputs give identical bytes. Missing values are empty cells in CSV and
``null`` in JSON; infinities are written as ``inf`` in both (a string in JSON,
which has no infinity literal).
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from typing import Iterable, Sequence


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return v


def to_csv(records: Iterable[dict], cols: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for rec in records:
        w.writerow([_cell(rec.get(c)) for c in cols])
    return buf.getvalue()


def to_json(records: Iterable[dict], cols: Sequence[str]) -> str:
    rows = [{c: _json_value(rec.get(c)) for c in cols} for rec in records]
    return json.dumps(rows, indent=1, allow_nan=False) + "\n"


def render(records: Iterable[dict], cols: Sequence[str], fmt: str) -> str:
    if fmt == "csv":
        return to_csv(records, cols)
    if fmt == "json":
        return to_json(records, cols)
    raise ValueError(f"unknown format {fmt!r}")


def write(text: str, path=None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
