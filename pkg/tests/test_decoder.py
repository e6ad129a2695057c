"""Tests for cli.decoder: end-to-end decoding and logical classification."""

import numpy as np
import pytest

from cli.decoder import Decoder, LogicalClass, classify, decode, matching_graphs
from cli.lattice import PauliOperator, extract_syndrome
from cli.noise import ChannelConfig, QubitSpec, sample_error, trial_rng
from tests import fakes


def _decoders(lat, t=10.0):
    return [
        Decoder(lat, "mwpm"),
        Decoder(lat, "rmwpm", fakes.uniform(lat.n_qubits), t),
    ]


@pytest.mark.parametrize("pauli", ["X", "Y", "Z"])
def test_every_single_qubit_error_is_corrected(lattice, pauli):
    lat = lattice(3)
    for decoder in _decoders(lat):
        for q in range(lat.n_qubits):
            error = PauliOperator.on_qubits(lat.n_qubits, [q], pauli)
            outcome = decoder.run(error)
            assert outcome.logical_class is LogicalClass.NONE, (decoder.mode, q)
            assert outcome.recovery == error


def test_trivial_syndrome_decodes_to_identity(lattice):
    lat = lattice(5)
    syn = extract_syndrome(lat, PauliOperator.identity(lat.n_qubits))
    assert decode(lat, syn, "mwpm") == PauliOperator.identity(lat.n_qubits)


@pytest.mark.parametrize("d", [3, 5])
def test_recovery_always_clears_the_syndrome(lattice, d):
    lat = lattice(d)
    channel = ChannelConfig("inid", tuple(fakes.uniform(lat.n_qubits, 40.0)), 6.0)
    for decoder in _decoders(lat, t=6.0):
        for trial in range(150):
            error = sample_error(channel, trial_rng(17, trial))
            recovery = decoder.decode(extract_syndrome(lat, error))
            assert extract_syndrome(lat, error * recovery).is_trivial
            assert decoder.run(error).logical_class is not LogicalClass.DETECTED


@pytest.mark.parametrize("d", [3, 5, 7])
def test_undetectable_logicals_are_classified(lattice, d):
    lat = lattice(d)
    decoder = Decoder(lat, "mwpm")
    z_l, x_l = lat.logical_z(), lat.logical_x()
    assert decoder.run(z_l).logical_class is LogicalClass.Z_L
    assert decoder.run(x_l).logical_class is LogicalClass.X_L
    assert decoder.run(z_l * x_l).logical_class is LogicalClass.Y_L
    assert decoder.run(z_l).failed


def test_classify_detected_failure(lattice):
    lat = lattice(3)
    error = PauliOperator.on_qubits(lat.n_qubits, [4], "X")
    outcome = classify(lat, error, PauliOperator.identity(lat.n_qubits))
    assert outcome.logical_class is LogicalClass.DETECTED
    assert not outcome.residual_syndrome_trivial
    assert outcome.logical_class.value == "detected_failure"


def test_stabilizers_do_not_change_the_class(lattice):
    lat = lattice(5)
    rng = np.random.default_rng(3)
    decoder = Decoder(lat, "mwpm")
    n = lat.n_qubits
    for _ in range(40):
        error = PauliOperator.from_bits(rng.random(n) < 0.08, rng.random(n) < 0.08)
        kind = "plaquette" if rng.random() < 0.5 else "vertex"
        g = lat.stabilizer(kind, int(rng.integers(0, lat.n_stabilizers)))
        assert decoder.run(error).logical_class is decoder.run(error * g).logical_class


def test_reweighting_follows_short_lived_qubits(lattice):
    lat = lattice(3)
    # One X on (0,2) flags plaquette (1,2). The escape upward crosses one
    # long-lived qubit, the escape downward two short-lived ones.
    specs = [QubitSpec(i, 100.0, 100.0) for i in range(lat.n_qubits)]
    top, middle, bottom = (lat.index_of(s) for s in [(0, 2), (2, 2), (4, 2)])
    specs[top] = QubitSpec(top, 1000.0, 1000.0)
    specs[middle] = QubitSpec(middle, 1.0, 1.0)
    specs[bottom] = QubitSpec(bottom, 1.0, 1.0)
    error = PauliOperator.on_qubits(lat.n_qubits, [top], "X")

    assert Decoder(lat, "mwpm").run(error).logical_class is LogicalClass.NONE
    outcome = Decoder(lat, "rmwpm", specs, 10.0).run(error)
    assert outcome.recovery == PauliOperator.on_qubits(
        lat.n_qubits, [middle, bottom], "X"
    )
    assert outcome.logical_class is LogicalClass.X_L


def test_matching_graphs_validation(lattice):
    lat = lattice(3)
    with pytest.raises(ValueError):
        matching_graphs(lat, "union-find")
    with pytest.raises(ValueError):
        matching_graphs(lat, "rmwpm")
    with pytest.raises(ValueError):
        matching_graphs(lat, "rmwpm", fakes.uniform(5), 1.0)
    plaquette_graph, vertex_graph = matching_graphs(lat, "mwpm")
    assert plaquette_graph.n_stabilizers == vertex_graph.n_stabilizers == 6


@pytest.mark.parametrize("d,t", [(3, 10.0), (5, 15.0)])
def test_rmwpm_on_identical_qubits_decodes_like_mwpm(lattice, d, t):
    lat = lattice(d)
    specs = fakes.uniform(lat.n_qubits)
    mwpm, rmwpm = Decoder(lat, "mwpm"), Decoder(lat, "rmwpm", specs, t)
    channel = ChannelConfig("iid", tuple(specs), t)
    for trial in range(500):
        error = sample_error(channel, trial_rng(29, trial))
        a, b = mwpm.run(error), rmwpm.run(error)
        assert a.recovery == b.recovery, trial
        assert a.logical_class is b.logical_class
