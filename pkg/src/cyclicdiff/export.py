"""CSV and JSON export of run records.

Both formats write floats with 17 significant digits (``%.17g``), which
round-trips every float64 exactly, and use LF line endings so output is
byte-identical for identical records.

JSON document layout (schema_version "1", keys in this order)::

    {
      "schema_version": "1",
      "config": {n, d, steps, snapshot_stride, seed, distribution, routes, outputs},
      "model": {n, parity, rate, coeff_matrix, degenerate, second_order},
      "snapshots": [{"t", "logmag", "coords": [[...], ...]}, ...],
      "diagnostics": {
        "ellipse_residual": [{"t", "value"}],
        "parity_separation": [{"t", "even_diameter", "odd_diameter", "gap"}],
        "growth_rate": [{"t_start", "t_end", "value"}]
      },
      "route_discrepancy": [{"t", "value"}]
    }

``logmag`` is ``null`` for a state that collapsed to exactly zero.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .harness import RunRecord


def fmt(value: float) -> str:
    return "%.17g" % value


def _open_for_write(path):
    path = Path(path)
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def export_csv(record: RunRecord, path) -> None:
    """One row per (snapshot, point): t, label, axis0..axis{d-1}, logmag."""
    d = record.config.d
    with _open_for_write(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "label"] + [f"axis{a}" for a in range(d)] + ["logmag"])
        for snap in record.snapshots:
            logmag = fmt(snap.logmag) if math.isfinite(snap.logmag) else "-inf"
            for label, row in enumerate(snap.coords):
                writer.writerow([snap.t, label] + [fmt(v) for v in row] + [logmag])


def read_csv(path) -> dict:
    """Parse an exported CSV back into {t: (coords rows, logmag)}."""
    out = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        d = len(header) - 3
        for row in reader:
            t = int(row[0])
            coords, _ = out.setdefault(t, ([], float(row[-1])))
            coords.append([float(v) for v in row[2:2 + d]])
    return out


def _encode(obj, indent: int, level: int) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite number {obj!r} cannot be written as JSON")
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(record: RunRecord) -> str:
    return _encode(record.to_dict(), 2, 0) + "\n"


def export_json(record: RunRecord, path) -> None:
    with _open_for_write(path) as fh:
        fh.write(dumps(record))


def load_json(path) -> RunRecord:
    with open(path, encoding="utf-8") as fh:
        return RunRecord.from_dict(json.load(fh))
