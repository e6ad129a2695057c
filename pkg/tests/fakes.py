"""Single source of in-memory calibration fixtures for the test suite.

Each fixture is a list of ``(qubit_id, t1_us, t2_us)`` rows. ``washington_d3``
is the bundled 3x3 ibm_washington table (``data/ibm_washington_d3.csv``);
qubit 8 violates the Ramsey limit and clamps to T2 = 33.0.
"""

import logging
import os

from cli.noise import QubitSpec

logger = logging.getLogger(__name__)

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA_DIR = os.path.join(REPO_ROOT, "data")


# --------------------------------------------------------------------------- #
# Fixtures: pre-baked calibration tables                                       #
# --------------------------------------------------------------------------- #

FIXTURES: dict[str, list[tuple[int, float, float]]] = {
    "washington_d3": [
        (0, 43.6, 12.2),
        (1, 100.7, 159.0),
        (2, 103.3, 182.8),
        (3, 110.9, 228.6),
        (4, 123.1, 114.0),
        (5, 111.0, 215.8),
        (6, 107.6, 133.7),
        (7, 101.8, 158.8),
        (8, 16.5, 100.0),
        (9, 77.6, 11.6),
        (10, 61.1, 8.6),
        (11, 71.1, 11.2),
        (12, 66.9, 11.9),
    ],
    # Five qubits: one per position of a distance-2 lattice, one clearly worst.
    "d2_one_bad": [
        (0, 80.0, 90.0),
        (1, 70.0, 85.0),
        (2, 90.0, 100.0),
        (3, 75.0, 10.0),
        (4, 60.0, 95.0),
    ],
    # Two well separated groups so inid noise differs sharply from iid.
    "bimodal_d3": [(i, 100.0, 150.0) for i in range(9)]
    + [(i, 100.0, 8.0) for i in range(9, 13)],
    "ramsey": [(0, 50.0, 120.0)],
}


def rows(name: str) -> list[tuple[int, float, float]]:
    return list(FIXTURES[name])


def specs(name: str) -> list[QubitSpec]:
    """Clamped specs for a fixture, in table order."""
    return [QubitSpec.calibrated(i, t1, t2) for i, t1, t2 in FIXTURES[name]]


def uniform(n: int, t_us: float = 100.0) -> list[QubitSpec]:
    return [QubitSpec(i, t_us, t_us) for i in range(n)]


def write_calibration(path: str, name: str | None = None, text: str | None = None):
    """Write a fixture (or raw text) as a calibration CSV; returns the path."""
    if text is None:
        assert name is not None
        lines = ["qubit_id,t1_us,t2_us"]
        lines += [f"{i},{t1},{t2}" for i, t1, t2 in FIXTURES[name]]
        text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.debug("wrote calibration fixture %s", path)
    return str(path)
