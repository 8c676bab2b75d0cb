"""Reading and writing the CSV/JSON tables used by the command line."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .fracops import SampledFunction
from .quadrature import Grid

__all__ = ["Table", "read_function_file", "format_table"]


class Table:
    """Named numeric (or string) columns plus ``key=value`` metadata."""

    def __init__(self, columns: dict, meta: dict | None = None):
        lengths = {len(v) for v in columns.values()}
        if len(lengths) > 1:
            raise ValueError("all columns must have the same length")
        self.columns = {k: list(v) for k, v in columns.items()}
        self.meta = dict(meta or {})

    @classmethod
    def from_function(cls, f: SampledFunction, meta=None, **extra) -> "Table":
        cols = {"x": f.x, "f": f.values}
        for name, col in extra.items():
            cols[name] = col.values if isinstance(col, SampledFunction) else col
        return cls(cols, meta)


def _num(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if value is None:
        return ""
    return format(float(value), ".17g")


def _json_value(value):
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else None
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def format_table(table: Table, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        for key, value in table.meta.items():
            buf.write(f"# {key}={_num(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in zip(*table.columns.values()):
            writer.writerow([_num(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "meta": {k: _json_value(v) for k, v in table.meta.items()},
            "columns": {
                k: [_json_value(v) for v in col] for k, col in table.columns.items()
            },
        }
        return json.dumps(doc, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def read_function_file(path_or_text, *, text: bool = False) -> SampledFunction:
    """Parse a function file (header ``x,f``; extra columns are ignored).

    Lines starting with ``#`` are metadata and skipped.  The ``x`` column
    must start at 0 and be uniformly spaced.
    """
    if text:
        content = path_or_text
    else:
        with open(path_or_text, newline="") as fh:
            content = fh.read()
    stripped = content.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        cols = doc["columns"]
        x, f = cols["x"], cols["f"]
    else:
        lines = [ln for ln in content.splitlines() if ln.strip() and not ln.startswith("#")]
        rows = list(csv.reader(lines))
        if not rows or [c.strip() for c in rows[0][:2]] != ["x", "f"]:
            raise ValueError("function file must start with the header 'x,f'")
        try:
            x = [float(r[0]) for r in rows[1:]]
            f = [float(r[1]) for r in rows[1:]]
        except (ValueError, IndexError) as exc:
            raise ValueError(f"malformed function file row: {exc}") from None
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if x.size < 2:
        raise ValueError("function file needs at least two rows")
    if not np.all(np.isfinite(x)) or not np.all(np.isfinite(f)):
        raise ValueError("function file contains non-finite values")
    if np.any(np.diff(x) <= 0):
        raise ValueError("x must increase strictly")
    grid = Grid.from_nodes(x)
    return SampledFunction(grid, f)
