"""CSV / JSON-lines encoders for trajectories and flat records.

Floats are written with ``repr`` (shortest string that round-trips to the
same double), so re-reading any output reproduces the run bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Iterable

from .simulation import Trajectory

TRAJECTORY_COLUMNS = ("t", "x", "C_at", "C_oc", "C_veg", "C_so", "T",
                      "P", "R_veg", "R_so", "L", "F_oc", "R_tip")


def clean(value):
    """Make a value JSON-safe: numpy scalars to Python, non-finite floats to None."""
    if isinstance(value, dict):
        return {k: clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _cell(value) -> str:
    value = clean(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def trajectory_rows(traj: Trajectory) -> list[dict]:
    rows = []
    for k in range(len(traj)):
        row = {"t": float(traj.times[k])}
        for name in TRAJECTORY_COLUMNS[1:]:
            row[name] = float(traj.column(name)[k])
        rows.append(row)
    return rows


def trajectory_to_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    buf.write(f"# fingerprint: {traj.fingerprint}\n# variant: {traj.variant}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRAJECTORY_COLUMNS)
    for row in trajectory_rows(traj):
        writer.writerow([_cell(row[c]) for c in TRAJECTORY_COLUMNS])
    return buf.getvalue()


def trajectory_to_jsonl(traj: Trajectory) -> str:
    meta = {"fingerprint": traj.fingerprint, "variant": traj.variant}
    return "".join(json.dumps({**row, **meta}) + "\n" for row in trajectory_rows(traj))


def records_to_csv(rows: Iterable[dict]) -> str:
    rows = list(rows)
    buf = io.StringIO()
    if not rows:
        return ""
    columns = list(rows[0])
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def records_to_jsonl(rows: Iterable[dict]) -> str:
    return "".join(json.dumps(clean(row), allow_nan=False) + "\n" for row in rows)


def encode_records(rows: Iterable[dict], fmt: str) -> str:
    if fmt == "csv":
        return records_to_csv(rows)
    if fmt == "jsonl":
        return records_to_jsonl(rows)
    raise ValueError(f"unknown format {fmt!r}")


def read_csv_records(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def write_text(path: str | Path, text: str) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
