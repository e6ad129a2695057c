"""Tests for cli.matching: lattice graphs, defect graphs and exact matching."""

import itertools
import math

import networkx as nx
import numpy as np
import pytest

from cli.constants import PLAQUETTE, SINK_BOTTOM, SINK_TOP, VERTEX, WEIGHT_CAP
from cli.lattice import PauliOperator, extract_syndrome
from cli.matching import (
    DefectGraph,
    WeightedLatticeGraph,
    build_defect_graph,
    decay_weights,
    min_weight_perfect_matching,
    real_node,
    reweighted_weights,
    shortest_path,
    uniform_weights,
    virtual_node,
)
from cli.noise import QubitSpec


def _brute_force(nodes, weight):
    """Minimum total weight over every perfect matching of ``nodes``."""
    if not nodes:
        return 0.0
    first, rest = nodes[0], nodes[1:]
    best = math.inf
    for i, other in enumerate(rest):
        remaining = rest[:i] + rest[i + 1 :]
        best = min(best, weight(first, other) + _brute_force(remaining, weight))
    return best


def _all_pairings(nodes):
    """Every perfect matching of ``nodes`` as position-ordered pairs."""
    if not nodes:
        yield ()
        return
    first, rest = nodes[0], nodes[1:]
    for i, other in enumerate(rest):
        for tail in _all_pairings(rest[:i] + rest[i + 1 :]):
            yield ((first, other),) + tail


# -- weights -----------------------------------------------------------------


def test_uniform_weights():
    assert uniform_weights(4).tolist() == [1.0, 1.0, 1.0, 1.0]


def test_decay_weights_half_life():
    # e^{-t/T} = 1/2 on both qubits, so the pair costs -ln(1/4).
    w = decay_weights(10.0 * math.log(2), [10.0, 10.0])
    assert w.sum() == pytest.approx(1.3863, abs=1e-4)


def test_decay_weights_capped_at_zero_time():
    assert decay_weights(0.0, [5.0, 50.0]).tolist() == [WEIGHT_CAP, WEIGHT_CAP]


def test_longer_lived_qubits_cost_more():
    w = decay_weights(3.0, [5.0, 20.0, 80.0, 320.0])
    assert all(b > a for a, b in zip(w, w[1:]))


def test_reweighted_weights_split_t1_and_t2():
    specs = [QubitSpec(0, 10.0, 5.0), QubitSpec(1, 40.0, 60.0)]
    w_x, w_z = reweighted_weights(specs, 2.0)
    assert w_x.tolist() == pytest.approx(decay_weights(2.0, [10.0, 40.0]).tolist())
    assert w_z.tolist() == pytest.approx(decay_weights(2.0, [5.0, 60.0]).tolist())


def test_decay_weights_reject_negative_time():
    with pytest.raises(ValueError):
        decay_weights(-1.0, [1.0])


# -- WeightedLatticeGraph ----------------------------------------------------


def test_graph_validation(lattice):
    lat = lattice(3)
    with pytest.raises(ValueError):
        WeightedLatticeGraph(lat, PLAQUETTE, np.ones(lat.n_qubits - 1))
    with pytest.raises(ValueError):
        WeightedLatticeGraph(lat, PLAQUETTE, -np.ones(lat.n_qubits))
    with pytest.raises(ValueError):
        WeightedLatticeGraph(lat, "star", np.ones(lat.n_qubits))


@pytest.mark.parametrize("kind", [PLAQUETTE, VERTEX])
def test_uniform_paths_are_taxicab(lattice, kind):
    lat = lattice(5)
    graph = WeightedLatticeGraph(lat, kind, uniform_weights(lat.n_qubits))
    sites = lat.plaquette_sites if kind == PLAQUETTE else lat.vertex_sites
    for a, b in itertools.combinations(range(len(sites)), 2):
        (ra, ca), (rb, cb) = sites[a], sites[b]
        w, path = shortest_path(graph, a, b)
        assert w == (abs(ra - rb) + abs(ca - cb)) / 2
        assert len(path) == w


def test_boundary_distance_under_uniform_weights(lattice):
    lat = lattice(5)
    graph = WeightedLatticeGraph(lat, PLAQUETTE, uniform_weights(lat.n_qubits))
    for j, (r, _) in enumerate(lat.plaquette_sites):
        top = (r + 1) / 2
        bottom = (lat.size - r) / 2
        assert graph.path(j, SINK_TOP)[0] == top
        assert graph.path(j, SINK_BOTTOM)[0] == bottom
        w, path = graph.boundary_path(j)
        assert w == min(top, bottom)
        assert len(path) == w


def test_boundary_paths_start_on_the_boundary(lattice):
    lat = lattice(3)
    graph = WeightedLatticeGraph(lat, PLAQUETTE, uniform_weights(lat.n_qubits))
    _, path = graph.path(0, SINK_TOP)
    rows = [lat.site_of(q)[0] for q in path]
    assert 0 in rows


def test_cheap_qubits_bend_the_path(lattice):
    lat = lattice(3)
    weights = np.full(lat.n_qubits, 10.0)
    # Plaquettes (1,0) and (1,4): the direct route crosses (1,1) and (1,3).
    a, b = lat.plaquette_sites.index((1, 0)), lat.plaquette_sites.index((1, 4))
    graph = WeightedLatticeGraph(lat, PLAQUETTE, weights)
    assert graph.path(a, b)[0] == 20.0
    weights[lat.index_of((1, 1))] = 0.5
    weights[lat.index_of((1, 3))] = 0.5
    graph = WeightedLatticeGraph(lat, PLAQUETTE, weights)
    w, path = graph.path(a, b)
    assert w == 1.0
    assert sorted(path) == sorted([lat.index_of((1, 1)), lat.index_of((1, 3))])


@pytest.mark.parametrize("kind", [PLAQUETTE, VERTEX])
def test_equal_cost_routes_take_smallest_qubit_sequence(lattice, kind):
    lat = lattice(5)
    graph = WeightedLatticeGraph(lat, kind, np.full(lat.n_qubits, 0.37))
    real = graph.graph.subgraph(range(graph.n_stabilizers))
    for a, b in itertools.combinations(range(graph.n_stabilizers), 2):
        routes = [
            tuple(real.edges[u, v]["qubit"] for u, v in zip(hops, hops[1:]))
            for hops in nx.all_shortest_paths(real, a, b)
        ]
        assert graph.path(a, b)[1] == min(routes)


def test_route_weights_scale_exactly(lattice):
    lat = lattice(5)
    rng = np.random.default_rng(5)
    base = rng.integers(1, 4, lat.n_qubits).astype(float)
    unit = WeightedLatticeGraph(lat, VERTEX, base)
    scaled = WeightedLatticeGraph(lat, VERTEX, base * 0.25)
    for a in range(unit.n_stabilizers):
        w, route = unit.boundary_path(a)
        assert scaled.boundary_path(a) == (w * 0.25, route)


def test_path_between_sinks_is_undefined(lattice):
    lat = lattice(3)
    graph = WeightedLatticeGraph(lat, PLAQUETTE, uniform_weights(lat.n_qubits))
    with pytest.raises(ValueError):
        graph.path(SINK_TOP, SINK_BOTTOM)
    assert graph.path(2, 2) == (0.0, ())


# -- min_weight_perfect_matching --------------------------------------------


def test_four_node_example():
    weights = {
        ("a", "b"): 1.0,
        ("c", "d"): 1.0,
        ("a", "c"): 2.0,
        ("b", "d"): 2.0,
        ("a", "d"): 3.0,
        ("b", "c"): 3.0,
    }
    m = min_weight_perfect_matching(DefectGraph(("a", "b", "c", "d"), weights))
    assert m.pairs == (("a", "b"), ("c", "d"))
    assert m.total_weight == 2.0


def test_edges_given_in_either_orientation():
    g = DefectGraph(("a", "b"), {("b", "a"): 4.0})
    assert min_weight_perfect_matching(g).pairs == (("a", "b"),)


def test_empty_graph():
    m = min_weight_perfect_matching(DefectGraph((), {}))
    assert m.pairs == () and m.total_weight == 0.0 and m.qubits() == set()


def test_odd_node_count_rejected():
    with pytest.raises(ValueError):
        min_weight_perfect_matching(DefectGraph(("a", "b", "c"), {("a", "b"): 1.0}))


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_matches_brute_force(n):
    rng = np.random.default_rng(n)
    nodes = tuple(range(n))
    for _ in range(250):
        weights = {
            (u, v): float(rng.integers(0, 10))
            for u, v in itertools.combinations(nodes, 2)
        }
        m = min_weight_perfect_matching(DefectGraph(nodes, weights))
        covered = sorted(x for pair in m.pairs for x in pair)
        assert covered == list(nodes)
        oracle = _brute_force(nodes, lambda u, v: weights[(min(u, v), max(u, v))])
        assert m.total_weight == oracle


def test_equal_weights_pick_lexicographically_first_pairing():
    weights = {pair: 1.0 for pair in itertools.combinations("abcd", 2)}
    m = min_weight_perfect_matching(DefectGraph(("a", "b", "c", "d"), weights))
    assert m.pairs == (("a", "b"), ("c", "d"))
    # Node order decides, not the labels.
    m = min_weight_perfect_matching(DefectGraph(("d", "c", "b", "a"), weights))
    assert m.pairs == (("d", "c"), ("b", "a"))


@pytest.mark.parametrize("n", [4, 6, 8])
def test_ties_resolve_to_lexicographic_minimum(n):
    rng = np.random.default_rng(100 + n)
    nodes = tuple(range(n))
    for _ in range(150):
        weights = {
            (u, v): 0.5 * float(rng.integers(0, 3))
            for u, v in itertools.combinations(nodes, 2)
        }
        best = min(
            _all_pairings(nodes),
            key=lambda pairs: (sum(weights[p] for p in pairs), pairs),
        )
        assert min_weight_perfect_matching(DefectGraph(nodes, weights)).pairs == best


def test_tie_break_ignores_weight_scale():
    rng = np.random.default_rng(8)
    nodes = tuple(range(6))
    for _ in range(100):
        weights = {
            (u, v): float(rng.integers(1, 4))
            for u, v in itertools.combinations(nodes, 2)
        }
        scaled = {k: w * 0.0625 for k, w in weights.items()}
        assert (
            min_weight_perfect_matching(DefectGraph(nodes, weights)).pairs
            == min_weight_perfect_matching(DefectGraph(nodes, scaled)).pairs
        )


def test_raising_one_edge_never_lowers_the_optimum():
    rng = np.random.default_rng(21)
    nodes = tuple(range(6))
    edges = list(itertools.combinations(nodes, 2))
    for _ in range(200):
        weights = {e: float(rng.uniform(0.0, 5.0)) for e in edges}
        before = min_weight_perfect_matching(DefectGraph(nodes, weights))
        bumped = dict(weights)
        e = edges[rng.integers(len(edges))]
        bumped[e] += float(rng.uniform(0.0, 3.0))
        after = min_weight_perfect_matching(DefectGraph(nodes, bumped))
        assert after.total_weight >= before.total_weight - 1e-9
        if e not in before.pairs:
            assert after.total_weight == pytest.approx(before.total_weight)


def test_matching_qubits_cancel_on_overlap():
    g = DefectGraph(
        ("a", "b", "c", "d"),
        {
            ("a", "b"): 1.0,
            ("c", "d"): 1.0,
            ("a", "c"): 9.0,
            ("b", "d"): 9.0,
            ("a", "d"): 9.0,
            ("b", "c"): 9.0,
        },
        paths={("a", "b"): (1, 2), ("c", "d"): (2, 3)},
    )
    assert min_weight_perfect_matching(g).qubits() == {1, 3}


# -- build_defect_graph ------------------------------------------------------


def test_defect_graph_shape(lattice):
    lat = lattice(5)
    graph = WeightedLatticeGraph(lat, PLAQUETTE, uniform_weights(lat.n_qubits))
    error = PauliOperator.on_qubits(lat.n_qubits, [lat.index_of((2, 2))], "X")
    error = error * PauliOperator.on_qubits(lat.n_qubits, [lat.index_of((6, 4))], "X")
    syn = extract_syndrome(lat, error)
    flagged = syn.flagged_plaquettes()
    assert len(flagged) == 4
    g = build_defect_graph(lat, syn, graph)
    assert g.nodes == tuple(real_node(j) for j in flagged) + tuple(
        virtual_node(j) for j in flagged
    )
    assert len(g.real_nodes) == 4
    for a in flagged:
        assert g.edges[(real_node(a), virtual_node(a))] == graph.boundary_path(a)[0]
        for b in flagged:
            if a != b:
                assert g.key(real_node(a), virtual_node(b)) not in g.edges
                assert g.edges[g.key(virtual_node(a), virtual_node(b))] == 0.0


def test_single_defect_goes_to_boundary(lattice):
    lat = lattice(3)
    graph = WeightedLatticeGraph(lat, PLAQUETTE, uniform_weights(lat.n_qubits))
    syn = extract_syndrome(lat, PauliOperator.on_qubits(lat.n_qubits, [0], "X"))
    m = min_weight_perfect_matching(build_defect_graph(lat, syn, graph))
    assert m.total_weight == 1.0
    assert m.qubits() == {0}


def test_trivial_syndrome_gives_empty_defect_graph(lattice):
    lat = lattice(3)
    graph = WeightedLatticeGraph(lat, VERTEX, uniform_weights(lat.n_qubits))
    syn = extract_syndrome(lat, PauliOperator.identity(lat.n_qubits))
    g = build_defect_graph(lat, syn, graph)
    assert g.nodes == () and g.edges == {}
    assert min_weight_perfect_matching(g).total_weight == 0.0


def test_matching_weight_monotone_in_edge_weights(lattice):
    lat = lattice(5)
    rng = np.random.default_rng(11)
    base = rng.uniform(0.5, 2.0, lat.n_qubits)
    error = PauliOperator.on_qubits(lat.n_qubits, [3, 17, 22, 40], "X")
    syn = extract_syndrome(lat, error)
    low = WeightedLatticeGraph(lat, PLAQUETTE, base)
    high = WeightedLatticeGraph(lat, PLAQUETTE, base * 1.5)
    w_low = min_weight_perfect_matching(build_defect_graph(lat, syn, low))
    w_high = min_weight_perfect_matching(build_defect_graph(lat, syn, high))
    assert w_high.total_weight == pytest.approx(1.5 * w_low.total_weight)
