"""Deterministic CSV / JSON emission with 17 significant digits."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np


def format_float(x: float) -> str:
    """17 significant digits; enough to round-trip any double."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def _json_value(v):
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        # JSON has no nan/inf
        return format_float(v) if math.isfinite(v) else "null"
    return json.dumps(str(v))


def _json_object(row: dict, columns) -> str:
    return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(row.get(k))}" for k in columns) + "}"


def render_table(rows, columns, fmt: str) -> str:
    columns = list(columns)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_csv_cell(r.get(c)) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        if not rows:
            return "[]\n"
        return "[\n" + ",\n".join("  " + _json_object(r, columns) for r in rows) + "\n]\n"
    raise ValueError(f"unknown format {fmt!r}")


def render_record(row: dict, columns, fmt: str) -> str:
    """A single result: one JSON object, or a one-row CSV."""
    if fmt == "json":
        return _json_object(row, list(columns)) + "\n"
    return render_table([row], columns, fmt)


def write_text(text: str, path=None) -> None:
    """Write to ``path``, or stdout when it is None or ``-``."""
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    p = Path(path)
    try:
        p.write_text(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {str(p)!r}: {exc.strerror}") from exc


def emit_report(payload, columns, fmt: str = "csv", path=None) -> str:
    """Render a row dict or a list of rows and write it out; returns the text."""
    text = render_record(payload, columns, fmt) if isinstance(payload, dict) else render_table(payload, columns, fmt)
    write_text(text, path)
    return text
