"""Calibration table ingestion.

The committed format is a UTF-8 CSV with header ``qubit_id,t1_us,t2_us``,
comma separated, dot decimals, times in microseconds. Blank lines and lines
starting with ``#`` are ignored. Rows violating T2 <= 2*T1 are clamped with a
warning, never rejected.
"""

import csv
import logging
import os

import numpy as np
from pydantic import ValidationError

from cli.conversions import coefficient_of_variation
from cli.noise import QubitSpec
from cli.schemas import CalibrationRow

HEADER = ("qubit_id", "t1_us", "t2_us")


class CalibrationError(ValueError):
    """A calibration table that cannot be trusted. Carries the line number."""

    def __init__(self, path: str, line: int | None, message: str) -> None:
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {message}")


def _data_lines(handle):
    for lineno, raw in enumerate(handle, start=1):
        text = raw.strip()
        if text and not text.startswith("#"):
            yield lineno, text


def read_calibration_rows(path: str) -> list[tuple[int, CalibrationRow]]:
    """Parse and validate rows; returns (line number, row) pairs."""
    if not os.path.isfile(path):
        raise CalibrationError(path, None, "calibration file not found")
    rows: list[tuple[int, CalibrationRow]] = []
    seen: dict[int, int] = {}
    with open(path, encoding="utf-8", newline="") as f:
        lines = list(_data_lines(f))
    if not lines:
        raise CalibrationError(path, None, "calibration file is empty")

    header_line, header = lines[0]
    fields = tuple(h.strip() for h in next(csv.reader([header])))
    if fields != HEADER:
        raise CalibrationError(
            path, header_line, f"expected header {','.join(HEADER)}, got {header!r}"
        )
    for lineno, text in lines[1:]:
        values = [v.strip() for v in next(csv.reader([text]))]
        if len(values) != len(HEADER):
            raise CalibrationError(
                path, lineno, f"expected {len(HEADER)} fields, got {len(values)}"
            )
        try:
            row = CalibrationRow(**dict(zip(HEADER, values)), text=tuple(values))
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
                for err in e.errors()
            )
            raise CalibrationError(path, lineno, problems) from None
        if row.qubit_id in seen:
            raise CalibrationError(
                path,
                lineno,
                f"duplicate qubit id {row.qubit_id} (first on line "
                f"{seen[row.qubit_id]})",
            )
        seen[row.qubit_id] = lineno
        rows.append((lineno, row))
    if not rows:
        raise CalibrationError(path, None, "calibration file has no qubit rows")
    return rows


def ingest_calibration(path: str) -> list[QubitSpec]:
    """Validated, Ramsey-clamped specs in file order."""
    specs = [
        QubitSpec.calibrated(row.qubit_id, row.t1_us, row.t2_us, row.text)
        for _, row in read_calibration_rows(path)
    ]
    logging.info("Loaded %d qubits from %s", len(specs), path)
    return specs


def uniform_specs(n: int, t_us: float) -> list[QubitSpec]:
    """n identical symmetric qubits (T1 = T2)."""
    return [QubitSpec(i, t_us, t_us) for i in range(n)]


def summarize_calibration(specs: list[QubitSpec]) -> dict:
    """Processor summary: T1/T2 extremes and means as read (pre-clamp), and
    coefficients of variation of the clamped values the simulator uses."""
    if not specs:
        raise ValueError("no qubits to summarize")
    t1 = np.array([s.t1 for s in specs])
    t2_raw = np.array([s.reported_t2 for s in specs])
    t2 = np.array([s.t2 for s in specs])
    return {
        "n_qubits": len(specs),
        "t1_min": float(t1.min()),
        "t1_max": float(t1.max()),
        "t1_mean": float(t1.mean()),
        "t2_min": float(t2_raw.min()),
        "t2_max": float(t2_raw.max()),
        "t2_mean": float(t2_raw.mean()),
        "cv_t1": coefficient_of_variation(t1),
        "cv_t2": coefficient_of_variation(t2),
        "n_clamped": int(np.count_nonzero(t2 < t2_raw)),
    }
