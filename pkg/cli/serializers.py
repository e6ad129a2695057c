"""Pure ``result -> row/dict`` builders plus the atomic file writers.

The CSV and JSON shapes are the on-disk result format, so they stay plain
dicts with stable keys. Every file starts with (CSV) or carries (JSON) the
config fingerprint and master seed.
"""

import csv
import io
import json
import logging
import os
from collections.abc import Iterable, Sequence

from cli.layout import Arrangement, arrangement_table
from cli.montecarlo import CurvePoint, EnsembleStats, SweepResult
from cli.noise import QubitSpec

POINT_COLUMNS = ["p_physical", "t_us", "P_L_hat", "ci_low", "ci_high", "n_trials"]
BREAKDOWN_COLUMNS = ["n_x_l", "n_z_l", "n_y_l", "n_detected"]
LAYOUT_COLUMNS = ["lattice_index", "qubit_id", "t1_us", "t2_us"]
CALIBRATION_COLUMNS = ["qubit_id", "t1_us", "t2_us"]

_BREAKDOWN_KEYS = dict(
    zip(BREAKDOWN_COLUMNS, ["X_L", "Z_L", "Y_L", "detected_failure"])
)


def provenance_line(fingerprint: str, seed: int) -> str:
    return f"# fingerprint={fingerprint} seed={seed}"


def point_columns(breakdown: bool = False) -> list[str]:
    return POINT_COLUMNS + (BREAKDOWN_COLUMNS if breakdown else [])


def build_point_row(point: CurvePoint, breakdown: bool = False) -> dict:
    row = {
        "p_physical": point.p_physical,
        "t_us": point.t_us,
        "P_L_hat": point.p_l_hat,
        "ci_low": point.ci_low,
        "ci_high": point.ci_high,
        "n_trials": point.n_trials,
    }
    if breakdown:
        for column, key in _BREAKDOWN_KEYS.items():
            row[column] = point.breakdown.get(key, 0)
    return row


def build_point(point: CurvePoint, breakdown: bool = False) -> dict:
    entry = build_point_row(point)
    entry["p_qubit_mean"] = point.p_qubit_mean
    entry["low_confidence"] = point.low_confidence
    if breakdown:
        entry["breakdown"] = dict(point.breakdown)
    return entry


def build_curve(
    result: SweepResult,
    p_pth: float | None = None,
    error: str | None = None,
    breakdown: bool = False,
) -> dict:
    entry = {
        "distance": result.distance,
        "decoder": result.decoder_mode,
        "noise_model": result.noise_model,
        "arrangement": result.arrangement,
        "seed": result.seed,
        "points": [build_point(pt, breakdown) for pt in result.points],
    }
    if p_pth is not None or error is not None:
        entry["pseudothreshold"] = p_pth
    if error is not None:
        entry["pseudothreshold_error"] = error
    return entry


def build_ensemble(stats: EnsembleStats) -> dict:
    return {
        "mean": stats.mean,
        "std": stats.std,
        "n_samples": len(stats.samples),
        "excluded": stats.excluded,
        "samples": list(stats.samples),
        "arrangement_seeds": list(stats.seeds),
    }


def build_layout_rows(arrangement: Arrangement) -> list[dict]:
    return arrangement_table(arrangement)


def build_calibration_rows(specs: Sequence[QubitSpec]) -> list[dict]:
    """Re-emission rows: the fields as read when the table text is known,
    otherwise the numbers with T2 before clamping."""
    return [
        dict(zip(CALIBRATION_COLUMNS, s.text))
        if s.text is not None
        else {"qubit_id": s.id, "t1_us": s.t1, "t2_us": s.reported_t2}
        for s in specs
    ]


def render_csv(
    columns: Sequence[str], rows: Iterable[dict], comment: str | None = None
) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(comment + "\n")
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _write_atomic(path: str, text: str) -> None:
    """Atomically write text (tmp + os.replace). Re-raises OSError after
    logging so callers never report success on a failed write."""
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except OSError as e:
        logging.error("Failed to save %s: %s", path, e)
        try:
            if os.path.exists(tmp):
                os.remove(tmp)
        except OSError:
            pass
        raise


def write_csv(
    path: str,
    columns: Sequence[str],
    rows: Iterable[dict],
    comment: str | None = None,
) -> str:
    _write_atomic(path, render_csv(columns, rows, comment))
    logging.info("Wrote %s", path)
    return path


def write_json(path: str, data: dict) -> str:
    _write_atomic(path, json.dumps(data, indent=2, sort_keys=True) + "\n")
    logging.info("Wrote %s", path)
    return path
