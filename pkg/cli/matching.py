"""Matching graphs, shortest paths and exact minimum-weight perfect matching.

Each CSS half of the code gets its own :class:`WeightedLatticeGraph`: nodes
are the stabilizers of one kind plus two boundary sinks, and every data qubit
is an edge between the (one or two) stabilizers it touches. The plaquette
graph matches X/Y defects and is weighted by T1; the vertex graph matches Z/Y
defects and is weighted by T2.
"""

import logging
from collections.abc import Hashable, Sequence
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from cli.constants import (
    PLAQUETTE,
    SINK_BOTTOM,
    SINK_LEFT,
    SINK_RIGHT,
    SINK_TOP,
    VERTEX,
    WEIGHT_CAP,
    WEIGHT_SCALE,
)
from cli.lattice import PlanarLattice, Syndrome
from cli.noise import QubitSpec

Node = Hashable


def uniform_weights(n: int) -> np.ndarray:
    return np.ones(n, dtype=float)


def decay_weights(t: float, times: Sequence[float]) -> np.ndarray:
    """-ln(1 - e^{-t/T}) per qubit, capped where the log diverges."""
    if t < 0:
        raise ValueError(f"exposure time must be >= 0, got {t}")
    with np.errstate(divide="ignore"):
        w = -np.log1p(-np.exp(-t / np.asarray(times, dtype=float)))
    return np.minimum(w, WEIGHT_CAP) + 0.0


def reweighted_weights(
    specs: Sequence[QubitSpec], t: float
) -> tuple[np.ndarray, np.ndarray]:
    """(T1-based weights for the plaquette graph, T2-based for the vertex graph)."""
    return (
        decay_weights(t, [s.t1 for s in specs]),
        decay_weights(t, [s.t2 for s in specs]),
    )


def to_units(w: float) -> int:
    """Integer weight on the 2**-32 grid the matcher compares on."""
    return int(round(float(w) * WEIGHT_SCALE))


class WeightedLatticeGraph:
    """One CSS matching graph with per-qubit edge weights.

    Edges carry an integer cost: the weight in :func:`to_units`, scaled so
    that the hop count breaks weight ties. Among routes of equal cost the
    lexicographically smallest qubit sequence wins. Distance tables are
    computed lazily per target and cached, so a graph built once per
    exposure time serves every trial at that time.
    """

    def __init__(self, lattice: PlanarLattice, kind: str, weights) -> None:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (lattice.n_qubits,):
            raise ValueError(
                f"expected {lattice.n_qubits} edge weights, got {weights.shape}"
            )
        if (weights < 0).any():
            raise ValueError("edge weights must be nonnegative")
        if kind == PLAQUETTE:
            checks, self.sinks = lattice.h_plaquette, (SINK_TOP, SINK_BOTTOM)
        elif kind == VERTEX:
            checks, self.sinks = lattice.h_vertex, (SINK_LEFT, SINK_RIGHT)
        else:
            raise ValueError(f"unknown graph kind {kind!r}")

        self.kind = kind
        self.lattice = lattice
        self.weights = weights
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(checks.shape[0]))
        self.graph.add_nodes_from(self.sinks)
        # A path never has more hops than the graph has nodes.
        self._hop = self.graph.number_of_nodes() + 1
        for q in range(lattice.n_qubits):
            ends = [int(j) for j in np.flatnonzero(checks[:, q])]
            if len(ends) == 1:
                ends.append(self._sink_for(lattice.site_of(q)))
            u, v = ends
            cost = to_units(weights[q]) * self._hop + 1
            existing = self.graph.get_edge_data(u, v)
            if existing is None or cost < existing["cost"]:
                self.graph.add_edge(u, v, weight=float(weights[q]), cost=cost, qubit=q)

        self._real = self.graph.subgraph(range(checks.shape[0]))
        self._tables: dict[Node, tuple[nx.Graph, dict[Node, int]]] = {}

    @property
    def n_stabilizers(self) -> int:
        return self._real.number_of_nodes()

    def _sink_for(self, site: tuple[int, int]) -> str:
        r, c = site
        if self.kind == PLAQUETTE:
            return SINK_TOP if r == 0 else SINK_BOTTOM
        return SINK_LEFT if c == 0 else SINK_RIGHT

    def _table(self, target: Node) -> tuple[nx.Graph, dict[Node, int]]:
        if target not in self._tables:
            if target in self.sinks:
                other = [s for s in self.sinks if s != target]
                view = nx.restricted_view(self.graph, other, [])
            else:
                view = self._real
            dist = nx.single_source_dijkstra_path_length(view, target, weight="cost")
            self._tables[target] = (view, dist)
        return self._tables[target]

    def _route(self, source: Node, target: Node) -> tuple[int, tuple[int, ...]]:
        """Cheapest (cost, qubits) from source to target, walking the
        smallest qubit index whenever several steps stay on a cheapest route."""
        view, dist = self._table(target)
        if source not in dist:
            raise RuntimeError(f"stabilizer {source} cannot reach {target}")
        qubits = []
        node = source
        while node != target:
            qubit, node = min(
                (data["qubit"], nbr)
                for nbr, data in view[node].items()
                if nbr in dist and dist[nbr] + data["cost"] == dist[node]
            )
            qubits.append(qubit)
        return dist[source], tuple(qubits)

    def _weight(self, cost: int) -> float:
        return (cost // self._hop) / WEIGHT_SCALE

    def path(self, a: Node, b: Node) -> tuple[float, tuple[int, ...]]:
        if a == b:
            return 0.0, ()
        if a in self.sinks and b in self.sinks:
            raise ValueError("no path is defined between two boundary sinks")
        if a in self.sinks:
            a, b = b, a
        cost, qubits = self._route(a, b)
        return self._weight(cost), qubits

    def boundary_path(self, a: int) -> tuple[float, tuple[int, ...]]:
        """Cheapest escape from stabilizer ``a`` to either sink."""
        cost, qubits = min(self._route(a, sink) for sink in self.sinks)
        return self._weight(cost), qubits


def shortest_path(
    graph: WeightedLatticeGraph, a: Node, b: Node
) -> tuple[float, tuple[int, ...]]:
    return graph.path(a, b)


def real_node(j: int) -> tuple[str, int]:
    return ("real", j)


def virtual_node(j: int) -> tuple[str, int]:
    return ("virtual", j)


@dataclass
class DefectGraph:
    """Nodes to pair up, candidate edges keyed in node order, and the data
    qubits each edge stands for."""

    nodes: tuple[Node, ...]
    edges: dict[tuple[Node, Node], float]
    paths: dict[tuple[Node, Node], tuple[int, ...]] = field(default_factory=dict)
    kind: str | None = None

    def __post_init__(self) -> None:
        self._order = {n: i for i, n in enumerate(self.nodes)}
        self.edges = {self.key(u, v): w for (u, v), w in self.edges.items()}
        self.paths = {self.key(u, v): p for (u, v), p in self.paths.items()}

    def key(self, u: Node, v: Node) -> tuple[Node, Node]:
        return (u, v) if self._order[u] < self._order[v] else (v, u)

    def position(self, node: Node) -> int:
        return self._order[node]

    @property
    def real_nodes(self) -> list[Node]:
        return [n for n in self.nodes if isinstance(n, tuple) and n[0] == "real"]


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[Node, Node], ...]
    total_weight: float
    paths: dict[tuple[Node, Node], tuple[int, ...]] = field(default_factory=dict)

    def qubits(self) -> set[int]:
        """Data qubits covered an odd number of times by the matched paths."""
        flipped: set[int] = set()
        for pair in self.pairs:
            for q in self.paths.get(pair, ()):
                flipped ^= {q}
        return flipped


def _flags(syndrome: Syndrome, kind: str) -> list[int]:
    if kind == PLAQUETTE:
        return syndrome.flagged_plaquettes()
    return syndrome.flagged_vertices()


def build_defect_graph(
    lattice: PlanarLattice, syndrome: Syndrome, graph: WeightedLatticeGraph
) -> DefectGraph:
    """Defects of ``graph.kind`` plus one private boundary node per defect."""
    if len(syndrome.plaquette) != lattice.n_stabilizers:
        raise ValueError("syndrome does not belong to this lattice")
    flagged = _flags(syndrome, graph.kind)
    reals = [real_node(j) for j in flagged]
    virtuals = [virtual_node(j) for j in flagged]
    edges: dict[tuple[Node, Node], float] = {}
    paths: dict[tuple[Node, Node], tuple[int, ...]] = {}

    for i, a in enumerate(flagged):
        for b in flagged[i + 1 :]:
            w, path = graph.path(a, b)
            edges[(real_node(a), real_node(b))] = w
            paths[(real_node(a), real_node(b))] = path
        w, path = graph.boundary_path(a)
        edges[(real_node(a), virtual_node(a))] = w
        paths[(real_node(a), virtual_node(a))] = path
    for i, a in enumerate(flagged):
        for b in flagged[i + 1 :]:
            edges[(virtual_node(a), virtual_node(b))] = 0.0

    return DefectGraph(
        nodes=tuple(reals + virtuals), edges=edges, paths=paths, kind=graph.kind
    )


def _lexicographic_costs(g: DefectGraph) -> dict[tuple[Node, Node], int]:
    """Integer edge costs whose unique optimum is, among the minimum-weight
    perfect matchings, the one whose pairs (ordered by node position) form the
    lexicographically smallest sequence.

    An edge (i, j) with i < j adds base**(n-1-i) * j on top of its weight in
    units, where base = n**2 exceeds everything the later nodes can add and
    base**n exceeds every possible sum of additions.
    """
    n = len(g.nodes)
    base = n * n
    top = base**n
    costs = {}
    for (u, v), w in g.edges.items():
        i, j = g.position(u), g.position(v)
        costs[(u, v)] = to_units(w) * top + base ** (n - 1 - i) * j
    return costs


def min_weight_perfect_matching(g: DefectGraph) -> Matching:
    """Exact blossom matching; ties go to the lexicographically smallest
    pairing in node order."""
    if not g.nodes:
        return Matching(pairs=(), total_weight=0.0)
    if len(g.nodes) % 2:
        raise ValueError(f"odd node count {len(g.nodes)}; no perfect matching")

    solver_graph = nx.Graph()
    solver_graph.add_nodes_from(g.nodes)
    for (u, v), cost in _lexicographic_costs(g).items():
        solver_graph.add_edge(u, v, cost=cost)
    # Integer costs keep networkx's blossom solver in exact arithmetic.
    mate = nx.min_weight_matching(solver_graph, weight="cost")

    pairs = sorted((g.key(u, v) for u, v in mate), key=lambda p: g.position(p[0]))
    if 2 * len(pairs) != len(g.nodes):
        raise RuntimeError("matching solver returned an imperfect matching")
    total = float(sum(g.edges[p] for p in pairs))
    logging.debug("Matched %d pairs, weight %.6g", len(pairs), total)
    return Matching(
        pairs=tuple(pairs),
        total_weight=total,
        paths={p: g.paths[p] for p in pairs if p in g.paths},
    )
