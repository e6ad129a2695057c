"""Planar code geometry: data/stabilizer sites, qubit indexing, parity checks,
logical operators and syndrome extraction.

Sites live on a (2d-1)x(2d-1) grid. Data qubits sit where ``r % 2 == c % 2``;
plaquettes (Z-type, flag X/Y) at r odd & c even; vertices (X-type, flag Z/Y)
at r even & c odd. Vertex stabilizers truncate to three qubits on the top and
bottom rows, plaquettes on the left and right columns, so Z_L runs
horizontally and X_L vertically.
"""

from dataclasses import dataclass, field

import numpy as np

from cli.constants import MAX_DISTANCE, MIN_DISTANCE

Site = tuple[int, int]

PAULI_LABELS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def _bits(values, n: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.uint8).reshape(-1)
    if arr.size != n:
        raise ValueError(f"bit-vector length {arr.size} != {n}")
    return arr & 1


@dataclass(frozen=True, eq=False)
class PauliOperator:
    """n-qubit Pauli operator as paired X/Z bit-vectors, phases dropped."""

    x: np.ndarray
    z: np.ndarray

    def __post_init__(self) -> None:
        if self.x.shape != self.z.shape or self.x.ndim != 1:
            raise ValueError("x and z bit-vectors must be 1-D and equal length")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_bits(cls, x, z) -> "PauliOperator":
        x_arr = np.asarray(x, dtype=np.uint8) & 1
        return cls(x_arr, _bits(z, x_arr.size))

    @classmethod
    def on_qubits(cls, n: int, qubits, pauli: str) -> "PauliOperator":
        """The operator applying ``pauli`` (X, Y or Z) to every listed qubit."""
        if pauli not in ("X", "Y", "Z"):
            raise ValueError(f"unknown Pauli {pauli!r}")
        op = cls.identity(n)
        idx = np.fromiter(qubits, dtype=np.intp)
        if pauli in ("X", "Y"):
            op.x[idx] ^= 1
        if pauli in ("Y", "Z"):
            op.z[idx] ^= 1
        return op

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        x = [1 if ch in "XY" else 0 for ch in label]
        z = [1 if ch in "YZ" else 0 for ch in label]
        if any(ch not in "IXYZ" for ch in label):
            raise ValueError(f"invalid Pauli label {label!r}")
        return cls(np.array(x, dtype=np.uint8), np.array(z, dtype=np.uint8))

    @property
    def num_qubits(self) -> int:
        return int(self.x.size)

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if other.num_qubits != self.num_qubits:
            raise ValueError("cannot compose operators of different length")
        return PauliOperator(self.x ^ other.x, self.z ^ other.z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def __hash__(self) -> int:
        return hash((self.x.tobytes(), self.z.tobytes()))

    def label(self) -> str:
        return "".join(
            PAULI_LABELS[(int(a), int(b))] for a, b in zip(self.x, self.z)
        )

    def __repr__(self) -> str:
        return f"PauliOperator({self.label()!r})"


@dataclass(frozen=True, eq=False)
class Syndrome:
    plaquette: np.ndarray
    vertex: np.ndarray

    @property
    def is_trivial(self) -> bool:
        return not (self.plaquette.any() or self.vertex.any())

    def flagged_plaquettes(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.plaquette)]

    def flagged_vertices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.vertex)]

    def __xor__(self, other: "Syndrome") -> "Syndrome":
        return Syndrome(self.plaquette ^ other.plaquette, self.vertex ^ other.vertex)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Syndrome):
            return NotImplemented
        return np.array_equal(self.plaquette, other.plaquette) and np.array_equal(
            self.vertex, other.vertex
        )


def qubit_index(r: int, c: int, rows: int, cols: int) -> int:
    """Index of the data qubit at site (r, c).

    Even-even sites map onto [0, rows*cols), odd-odd sites after them.
    """
    if not (0 <= r <= 2 * rows - 2 and 0 <= c <= 2 * cols - 2):
        raise ValueError(f"site ({r}, {c}) outside the {rows}x{cols} lattice")
    if r % 2 != c % 2:
        raise ValueError(f"site ({r}, {c}) is not a data site")
    return (r // 2) * (cols - c % 2) + (c // 2) + (r % 2) * rows * cols


@dataclass(frozen=True, eq=False)
class PlanarLattice:
    """Immutable distance-d planar code. Build it with :func:`build_lattice`."""

    distance: int
    data_sites: tuple[Site, ...]
    plaquette_sites: tuple[Site, ...]
    vertex_sites: tuple[Site, ...]
    plaquette_supports: tuple[tuple[int, ...], ...]
    vertex_supports: tuple[tuple[int, ...], ...]
    logical_z_support: tuple[int, ...]
    logical_x_support: tuple[int, ...]
    h_plaquette: np.ndarray = field(repr=False)
    h_vertex: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return 2 * self.distance - 1

    @property
    def n_qubits(self) -> int:
        return len(self.data_sites)

    @property
    def n_stabilizers(self) -> int:
        return len(self.plaquette_sites)

    @property
    def center(self) -> Site:
        return (self.distance - 1, self.distance - 1)

    @property
    def horizontal_sublattice(self) -> range:
        return range(self.distance**2)

    @property
    def vertical_sublattice(self) -> range:
        return range(self.distance**2, self.n_qubits)

    def index_of(self, site: Site) -> int:
        return qubit_index(site[0], site[1], self.distance, self.distance)

    def site_of(self, index: int) -> Site:
        return self.data_sites[index]

    def logical_z(self) -> PauliOperator:
        return PauliOperator.on_qubits(self.n_qubits, self.logical_z_support, "Z")

    def logical_x(self) -> PauliOperator:
        return PauliOperator.on_qubits(self.n_qubits, self.logical_x_support, "X")

    def stabilizer(self, kind: str, j: int) -> PauliOperator:
        """Generator j as an operator: plaquettes are Z-type, vertices X-type."""
        if kind == "plaquette":
            return PauliOperator.on_qubits(
                self.n_qubits, self.plaquette_supports[j], "Z"
            )
        if kind == "vertex":
            return PauliOperator.on_qubits(self.n_qubits, self.vertex_supports[j], "X")
        raise ValueError(f"unknown stabilizer kind {kind!r}")


def _neighbours(r: int, c: int, size: int) -> list[Site]:
    out = []
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        rr, cc = r + dr, c + dc
        if 0 <= rr < size and 0 <= cc < size:
            out.append((rr, cc))
    return out


def _check_matrix(supports, n: int) -> np.ndarray:
    h = np.zeros((len(supports), n), dtype=np.uint8)
    for j, support in enumerate(supports):
        h[j, list(support)] = 1
    h.setflags(write=False)
    return h


def build_lattice(d: int) -> PlanarLattice:
    if not MIN_DISTANCE <= d <= MAX_DISTANCE:
        raise ValueError(
            f"distance must be in [{MIN_DISTANCE}, {MAX_DISTANCE}], got {d}"
        )
    size = 2 * d - 1
    n = d * d + (d - 1) * (d - 1)

    data: list[Site | None] = [None] * n
    plaquettes: list[Site] = []
    vertices: list[Site] = []
    for r in range(size):
        for c in range(size):
            if r % 2 == c % 2:
                data[qubit_index(r, c, d, d)] = (r, c)
            elif r % 2 == 1:
                plaquettes.append((r, c))
            else:
                vertices.append((r, c))

    def support(site: Site) -> tuple[int, ...]:
        return tuple(
            sorted(qubit_index(rr, cc, d, d) for rr, cc in _neighbours(*site, size))
        )

    plaquette_supports = tuple(support(s) for s in plaquettes)
    vertex_supports = tuple(support(s) for s in vertices)

    mid = 2 * ((d - 1) // 2)
    logical_z = tuple(qubit_index(mid, c, d, d) for c in range(0, size, 2))
    logical_x = tuple(qubit_index(r, mid, d, d) for r in range(0, size, 2))

    return PlanarLattice(
        distance=d,
        data_sites=tuple(s for s in data if s is not None),
        plaquette_sites=tuple(plaquettes),
        vertex_sites=tuple(vertices),
        plaquette_supports=plaquette_supports,
        vertex_supports=vertex_supports,
        logical_z_support=logical_z,
        logical_x_support=logical_x,
        h_plaquette=_check_matrix(plaquette_supports, n),
        h_vertex=_check_matrix(vertex_supports, n),
    )


def _check_length(lattice: PlanarLattice, op: PauliOperator) -> None:
    if op.num_qubits != lattice.n_qubits:
        raise ValueError(
            f"operator acts on {op.num_qubits} qubits, lattice has {lattice.n_qubits}"
        )


def extract_syndrome(lattice: PlanarLattice, error: PauliOperator) -> Syndrome:
    """Plaquettes see the X part of the error, vertices the Z part."""
    _check_length(lattice, error)
    plaquette = (lattice.h_plaquette.astype(np.intp) @ error.x) & 1
    vertex = (lattice.h_vertex.astype(np.intp) @ error.z) & 1
    return Syndrome(plaquette.astype(np.uint8), vertex.astype(np.uint8))


def commutes_with_logicals(
    lattice: PlanarLattice, op: PauliOperator
) -> tuple[bool, bool]:
    """(commutes with X_L, commutes with Z_L) by symplectic inner product."""
    _check_length(lattice, op)
    anti_x = int(op.z[list(lattice.logical_x_support)].sum()) & 1
    anti_z = int(op.x[list(lattice.logical_z_support)].sum()) & 1
    return anti_x == 0, anti_z == 0
