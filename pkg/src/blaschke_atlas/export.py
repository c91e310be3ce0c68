"""CSV and JSON export of classified grids, with exact re-import.

Floats are written with repr so a CSV round trip reproduces every value
bit for bit.  Empty fields stand for "no cycle".
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .atlas import ClassGrid, Connectivity, Label, ParamClassRecord, PlaneSpec
from .polys import PolyGrid

CSV_HEADER = ["a_re", "a_im", "label", "period", "mult_re", "mult_im", "swapping", "connectivity", "iters"]


@dataclass(frozen=True)
class RecordRow:
    """The flat per-pixel view stored in CSV files."""

    a: complex
    label: str
    period: Optional[int]
    multiplier: Optional[complex]
    swapping: bool
    connectivity: str
    iters: int
    family: Optional[str] = None

    @classmethod
    def from_record(cls, rec: ParamClassRecord) -> "RecordRow":
        return cls(rec.a, rec.label.value, rec.period, rec.multiplier, rec.swapping,
                   rec.connectivity.value, rec.iterations)

    def fields(self) -> list[str]:
        m = self.multiplier
        out = [
            repr(self.a.real), repr(self.a.imag), self.label,
            "" if self.period is None else str(self.period),
            "" if m is None else repr(m.real), "" if m is None else repr(m.imag),
            "1" if self.swapping else "0", self.connectivity, str(self.iters),
        ]
        return out if self.family is None else [self.family] + out

    @classmethod
    def parse(cls, row: dict) -> "RecordRow":
        has_mult = row["mult_re"] != ""
        return cls(
            a=complex(float(row["a_re"]), float(row["a_im"])),
            label=row["label"],
            period=int(row["period"]) if row["period"] else None,
            multiplier=complex(float(row["mult_re"]), float(row["mult_im"])) if has_mult else None,
            swapping=row["swapping"] == "1",
            connectivity=row["connectivity"],
            iters=int(row["iters"]),
            family=row.get("family"),
        )


def grid_rows(grid) -> list[RecordRow]:
    """Rows of a parameter or polynomial grid, row-major from the top-left."""
    if isinstance(grid, ClassGrid):
        return [r if isinstance(r, RecordRow) else RecordRow.from_record(r) for r in grid.records]
    if isinstance(grid, PolyGrid):
        centres = grid.window.pixel_centers().ravel()
        rows = []
        for c, fate in zip(centres, grid.fates):
            cyc = fate.cycle
            rows.append(RecordRow(
                complex(c), grid.pixel_class(fate).value,
                None if cyc is None else cyc.period,
                None if cyc is None else cyc.multiplier,
                False, Connectivity.UNKNOWN.value, fate.iterations_used, grid.family.value,
            ))
        return rows
    raise TypeError(f"cannot export {type(grid).__name__}")


def _open(path, mode):
    try:
        return open(path, mode, newline="" if "b" not in mode else None)
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


def write_csv(path, rows: Iterable[RecordRow]) -> None:
    rows = list(rows)
    header = CSV_HEADER if not rows or rows[0].family is None else ["family"] + CSV_HEADER
    with _open(path, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(r.fields())


def read_csv(path) -> list[RecordRow]:
    with _open(path, "r") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_HEADER) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing CSV columns {sorted(missing)}")
        try:
            return [RecordRow.parse(row) for row in reader]
        except (ValueError, KeyError) as exc:
            raise ValueError(f"{path}: malformed row ({exc})") from exc


def grid_from_csv(path, window: PlaneSpec) -> ClassGrid:
    """A parameter grid rebuilt from cached CSV rows, ready for re-rendering."""
    rows = read_csv(path)
    nx, ny = window.resolution
    if len(rows) != nx * ny:
        raise ValueError(f"{path}: {len(rows)} rows do not fill a {nx}x{ny} window")
    for r in rows:
        Label(r.label)
    return ClassGrid(window, rows)


def export_records(grid, path, fmt: str = "csv") -> None:
    """Write a grid as CSV rows or as a JSON list of full records."""
    if fmt == "csv":
        write_csv(path, grid_rows(grid))
    elif fmt == "json":
        if isinstance(grid, ClassGrid) and all(isinstance(r, ParamClassRecord) for r in grid.records):
            payload = [r.to_dict() for r in grid.records]
        else:
            payload = [r.fields() for r in grid_rows(grid)]
        write_json(path, payload)
    else:
        raise ValueError(f"unknown export format {fmt!r}")


def write_json(path, payload) -> None:
    with _open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_json(path):
    with _open(path, "r") as fh:
        return json.load(fh)


def record_to_json(rec: ParamClassRecord) -> str:
    return json.dumps(rec.to_dict(), indent=2)


def record_from_json(text: str) -> ParamClassRecord:
    return ParamClassRecord.from_dict(json.loads(text))
