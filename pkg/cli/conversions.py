"""Pure numeric helpers: grids, curve crossings and spread statistics."""

import math
from collections.abc import Sequence

import numpy as np

from cli.constants import DEFAULT_P_MAX, DEFAULT_P_MIN, POINTS_PER_DECADE


def coefficient_of_variation(values: Sequence[float]) -> float:
    """Population standard deviation over the mean."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("coefficient of variation of an empty sequence")
    mean = float(arr.mean())
    if mean == 0.0:
        raise ValueError("coefficient of variation undefined for zero mean")
    return float(arr.std()) / mean


def log_grid(
    lo: float = DEFAULT_P_MIN,
    hi: float = DEFAULT_P_MAX,
    per_decade: int = POINTS_PER_DECADE,
) -> list[float]:
    """Log-spaced points from lo to hi inclusive, ``per_decade`` per decade."""
    if not 0 < lo < hi:
        raise ValueError(f"invalid grid bounds ({lo}, {hi})")
    decades = math.log10(hi / lo)
    count = max(2, int(round(decades * per_decade)) + 1)
    return [float(x) for x in np.geomspace(lo, hi, count)]


def loglog_crossing(x1: float, y1: float, x2: float, y2: float) -> float:
    """Where the segment (x1,y1)-(x2,y2) meets y = x, interpolated in log-log.

    Falls back to linear interpolation when either y is zero (log undefined).
    """
    if y1 <= 0 or y2 <= 0:
        return linear_crossing(x1, y1, x2, y2)
    g1 = math.log(y1) - math.log(x1)
    g2 = math.log(y2) - math.log(x2)
    if g1 == g2:
        raise ValueError("segment is parallel to the identity line")
    lx1, lx2 = math.log(x1), math.log(x2)
    return math.exp(lx1 + g1 * (lx2 - lx1) / (g1 - g2))


def linear_crossing(x1: float, y1: float, x2: float, y2: float) -> float:
    g1 = y1 - x1
    g2 = y2 - x2
    if g1 == g2:
        raise ValueError("segment is parallel to the identity line")
    return x1 + g1 * (x2 - x1) / (g1 - g2)
