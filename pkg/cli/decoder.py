"""One noiseless decoding cycle: syndrome -> matching -> recovery -> logical
class.

``mwpm`` weighs every edge 1, so matched paths have minimal Hamming weight.
``rmwpm`` weighs qubit i by -ln(1 - e^{-t/T}) with T1 on the plaquette graph
and T2 on the vertex graph, so paths through short-lived qubits are cheap.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from cli.constants import DECODER_MODES, DECODER_RMWPM, PLAQUETTE, VERTEX
from cli.lattice import (
    PauliOperator,
    PlanarLattice,
    Syndrome,
    commutes_with_logicals,
    extract_syndrome,
)
from cli.matching import (
    WeightedLatticeGraph,
    build_defect_graph,
    min_weight_perfect_matching,
    reweighted_weights,
    uniform_weights,
)
from cli.noise import QubitSpec


class LogicalClass(str, Enum):
    NONE = "none"
    X_L = "X_L"
    Z_L = "Z_L"
    Y_L = "Y_L"
    DETECTED = "detected_failure"

    @property
    def is_failure(self) -> bool:
        return self is not LogicalClass.NONE


@dataclass(frozen=True)
class DecodeOutcome:
    recovery: PauliOperator
    residual: PauliOperator
    residual_syndrome_trivial: bool
    logical_class: LogicalClass

    @property
    def failed(self) -> bool:
        return self.logical_class.is_failure


def matching_graphs(
    lattice: PlanarLattice,
    mode: str,
    specs: Sequence[QubitSpec] | None = None,
    t: float | None = None,
) -> tuple[WeightedLatticeGraph, WeightedLatticeGraph]:
    """(plaquette graph, vertex graph) for a decoder mode.

    rmwpm needs the specs placed on the lattice and the exposure time.
    """
    if mode not in DECODER_MODES:
        raise ValueError(f"unknown decoder mode {mode!r}")
    if mode == DECODER_RMWPM:
        if specs is None or t is None:
            raise ValueError("rmwpm weights need qubit specs and exposure time")
        if len(specs) != lattice.n_qubits:
            raise ValueError(
                f"{len(specs)} specs for a lattice of {lattice.n_qubits} qubits"
            )
        w_x, w_z = reweighted_weights(specs, t)
    else:
        w_x = w_z = uniform_weights(lattice.n_qubits)
    return (
        WeightedLatticeGraph(lattice, PLAQUETTE, w_x),
        WeightedLatticeGraph(lattice, VERTEX, w_z),
    )


def _matched_qubits(
    lattice: PlanarLattice, syndrome: Syndrome, graph: WeightedLatticeGraph
) -> np.ndarray:
    bits = np.zeros(lattice.n_qubits, dtype=np.uint8)
    matching = min_weight_perfect_matching(build_defect_graph(lattice, syndrome, graph))
    for q in matching.qubits():
        bits[q] = 1
    return bits


def decode(
    lattice: PlanarLattice,
    syndrome: Syndrome,
    mode: str,
    weights: tuple[WeightedLatticeGraph, WeightedLatticeGraph] | None = None,
) -> PauliOperator:
    """Recovery operator: X along plaquette-graph paths, Z along vertex-graph
    paths, Y where both overlap."""
    if weights is None:
        weights = matching_graphs(lattice, mode)
    if syndrome.is_trivial:
        return PauliOperator.identity(lattice.n_qubits)
    plaquette_graph, vertex_graph = weights
    return PauliOperator(
        _matched_qubits(lattice, syndrome, plaquette_graph),
        _matched_qubits(lattice, syndrome, vertex_graph),
    )


def classify(
    lattice: PlanarLattice, error: PauliOperator, recovery: PauliOperator
) -> DecodeOutcome:
    residual = error * recovery
    trivial = extract_syndrome(lattice, residual).is_trivial
    if not trivial:
        cls = LogicalClass.DETECTED
    else:
        with_x, with_z = commutes_with_logicals(lattice, residual)
        if with_x and with_z:
            cls = LogicalClass.NONE
        elif with_z:
            cls = LogicalClass.Z_L
        elif with_x:
            cls = LogicalClass.X_L
        else:
            cls = LogicalClass.Y_L
    return DecodeOutcome(
        recovery=recovery,
        residual=residual,
        residual_syndrome_trivial=trivial,
        logical_class=cls,
    )


class Decoder:
    """A decoder bound to one lattice, mode and exposure time.

    Holds the two matching graphs so their shortest-path caches are shared by
    every trial decoded with it.
    """

    def __init__(
        self,
        lattice: PlanarLattice,
        mode: str,
        specs: Sequence[QubitSpec] | None = None,
        t: float | None = None,
    ) -> None:
        self.lattice = lattice
        self.mode = mode
        self.graphs = matching_graphs(lattice, mode, specs, t)

    def decode(self, syndrome: Syndrome) -> PauliOperator:
        return decode(self.lattice, syndrome, self.mode, self.graphs)

    def run(self, error: PauliOperator) -> DecodeOutcome:
        """Measure, decode and classify one sampled error."""
        recovery = self.decode(extract_syndrome(self.lattice, error))
        return classify(self.lattice, error, recovery)
