"""Placement of physical qubits onto lattice positions.

The optimized layout separates qubits by quality: the (d-1)^2 worst go to the
vertical (odd-odd) sublattice with the very worst in the bulk, the d^2 best go
to the horizontal (even-even) sublattice with the very best in the bulk, which
leaves the most average qubits along the outer walls.
"""

import csv
import logging
import os
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from cli.constants import (
    ARRANGE_AS_INDEXED,
    ARRANGE_IMPORTED,
    ARRANGE_OPTIMIZED,
    ARRANGE_RANDOM,
    RANK_KEYS,
    RANK_MIN_T,
    RANK_P_FAIL,
    RANK_T1,
    RANK_T2,
    SELECT_BEST,
    SELECT_RANDOM,
)
from cli.lattice import PlanarLattice
from cli.noise import QubitSpec, physical_error_probability


@dataclass(frozen=True)
class Arrangement:
    """``assignment[j]`` is the qubit placed at lattice index j."""

    assignment: tuple[QubitSpec, ...]
    strategy: str
    rank_key: str | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        ids = [s.id for s in self.assignment]
        if len(set(ids)) != len(ids):
            raise ValueError("arrangement places a qubit twice")

    @property
    def specs(self) -> tuple[QubitSpec, ...]:
        return self.assignment

    def qubit_ids(self) -> list[int]:
        return [s.id for s in self.assignment]


def _score(spec: QubitSpec, rank_key: str, t_ref: float) -> float:
    """Lower is better."""
    if rank_key == RANK_T2:
        return -spec.t2
    if rank_key == RANK_T1:
        return -spec.t1
    if rank_key == RANK_MIN_T:
        return -min(spec.t1, spec.t2)
    if rank_key == RANK_P_FAIL:
        return physical_error_probability(spec, t_ref)
    raise ValueError(f"unknown rank key {rank_key!r}; expected one of {RANK_KEYS}")


def rank_qubits(
    specs: Sequence[QubitSpec], rank_key: str = RANK_T2, t_ref: float = 1.0
) -> list[QubitSpec]:
    """Best to worst; ties broken by ascending id."""
    if not specs:
        raise ValueError("cannot rank an empty set of qubits")
    return sorted(specs, key=lambda s: (_score(s, rank_key, t_ref), s.id))


def _require(lattice: PlanarLattice, specs: Sequence[QubitSpec]) -> None:
    if len(specs) < lattice.n_qubits:
        raise ValueError(
            f"{len(specs)} qubits cannot fill a distance-{lattice.distance} "
            f"lattice of {lattice.n_qubits}"
        )


def center_out(lattice: PlanarLattice, indices: Iterable[int]) -> list[int]:
    """Lattice indices ordered by Chebyshev distance from the center site,
    row-major among equals."""
    cr, cc = lattice.center

    def key(j: int) -> tuple[int, int, int]:
        r, c = lattice.site_of(j)
        return (max(abs(r - cr), abs(c - cc)), r, c)

    return sorted(indices, key=key)


def as_indexed_arrangement(
    lattice: PlanarLattice, specs: Sequence[QubitSpec]
) -> Arrangement:
    """The first n qubits in table order, qubit k at lattice index k."""
    _require(lattice, specs)
    return Arrangement(tuple(specs[: lattice.n_qubits]), ARRANGE_AS_INDEXED)


def random_arrangement(
    lattice: PlanarLattice, specs: Sequence[QubitSpec], seed: int
) -> Arrangement:
    _require(lattice, specs)
    order = np.random.default_rng(seed).permutation(len(specs))[: lattice.n_qubits]
    return Arrangement(tuple(specs[i] for i in order), ARRANGE_RANDOM, seed=seed)


def select_qubits(
    lattice: PlanarLattice,
    specs: Sequence[QubitSpec],
    rank_key: str = RANK_T2,
    t_ref: float = 1.0,
    selection: str = SELECT_BEST,
    seed: int | None = None,
) -> list[QubitSpec]:
    """The n qubits a processor contributes to the code, best to worst."""
    _require(lattice, specs)
    n = lattice.n_qubits
    if selection == SELECT_BEST:
        return rank_qubits(specs, rank_key, t_ref)[:n]
    if selection == SELECT_RANDOM:
        if seed is None:
            raise ValueError("random qubit selection needs a seed")
        pool = sorted(specs, key=lambda s: s.id)
        picked = np.random.default_rng(seed).choice(len(pool), size=n, replace=False)
        return rank_qubits([pool[i] for i in picked], rank_key, t_ref)
    raise ValueError(f"unknown selection mode {selection!r}")


def optimize_layout(
    lattice: PlanarLattice,
    specs: Sequence[QubitSpec],
    rank_key: str = RANK_T2,
    t_ref: float = 1.0,
    selection: str = SELECT_BEST,
    seed: int | None = None,
) -> Arrangement:
    ranked = select_qubits(lattice, specs, rank_key, t_ref, selection, seed)
    n_horizontal = lattice.distance**2

    if len({_score(s, rank_key, t_ref) for s in ranked}) == 1:
        logging.info("All qubits rank equal; keeping id-order placement")
        placed = tuple(sorted(ranked, key=lambda s: s.id))
        return Arrangement(placed, ARRANGE_OPTIMIZED, rank_key=rank_key)

    slots: list[QubitSpec | None] = [None] * lattice.n_qubits
    best, worst = ranked[:n_horizontal], ranked[n_horizontal:]
    # Best nearest the center on the horizontal sublattice, worst on the vertical.
    horizontal = center_out(lattice, lattice.horizontal_sublattice)
    vertical = center_out(lattice, lattice.vertical_sublattice)
    for spec, j in zip(best, horizontal):
        slots[j] = spec
    for spec, j in zip(reversed(worst), vertical):
        slots[j] = spec
    return Arrangement(
        tuple(s for s in slots if s is not None), ARRANGE_OPTIMIZED, rank_key=rank_key
    )


def arrangement_table(arrangement: Arrangement) -> list[dict]:
    """Rows of (lattice_index, qubit_id, t1_us, t2_us) for export."""
    return [
        {
            "lattice_index": j,
            "qubit_id": s.id,
            "t1_us": s.t1,
            "t2_us": s.reported_t2,
        }
        for j, s in enumerate(arrangement.assignment)
    ]


def arrangement_from_table(
    lattice: PlanarLattice,
    rows: Iterable[Mapping],
    specs: Sequence[QubitSpec],
) -> Arrangement:
    """Rebuild an arrangement from (lattice_index, qubit_id) rows."""
    by_id = {s.id: s for s in specs}
    slots: dict[int, QubitSpec] = {}
    for row in rows:
        j, qid = int(row["lattice_index"]), int(row["qubit_id"])
        if not 0 <= j < lattice.n_qubits:
            raise ValueError(f"lattice index {j} out of range")
        if j in slots:
            raise ValueError(f"lattice index {j} assigned twice")
        if qid not in by_id:
            raise ValueError(f"unknown qubit id {qid}")
        slots[j] = by_id[qid]
    if len(slots) != lattice.n_qubits:
        raise ValueError(
            f"table fills {len(slots)} of {lattice.n_qubits} lattice positions"
        )
    return Arrangement(
        tuple(slots[j] for j in range(lattice.n_qubits)), ARRANGE_IMPORTED
    )


def read_layout_table(path: str) -> list[dict]:
    """Rows of a layout CSV as written by optimize-layout; ``#`` lines are
    provenance and skipped."""
    if not os.path.isfile(path):
        raise ValueError(f"layout table {path} not found")
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(
            line for line in f if line.strip() and not line.startswith("#")
        )
        missing = {"lattice_index", "qubit_id"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        rows = list(reader)
    logging.debug("Read %d layout rows from %s", len(rows), path)
    return rows
