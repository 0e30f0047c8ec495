"""Circuit intermediate representation shared by every other module.

A :class:`Circuit` is an immutable list of :class:`Gate` objects on ``num_qubits``
wires. Qubit 0 is the top wire and is written as the leftmost character of a
basis-state label, so ``"100"`` on three qubits has qubit 0 set.

The gate families cover the RevLib NCV/MCT libraries (multi-controlled X,
controlled SWAP, Peres, controlled V and V-dagger) plus the usual single-qubit
gates, which are handy when writing tests.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class GateKind(str, enum.Enum):
    X = "X"
    SWAP = "SWAP"
    V = "V"
    VDG = "VDG"
    H = "H"
    S = "S"
    SDG = "SDG"
    T = "T"
    TDG = "TDG"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"


_TWO_TARGET = {GateKind.SWAP}
_PARAMETRIC = {GateKind.RX, GateKind.RY, GateKind.RZ}
_ADJOINT = {
    GateKind.V: GateKind.VDG,
    GateKind.VDG: GateKind.V,
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
}

_SQ2 = 1 / math.sqrt(2)
_MATRICES = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.V: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
    GateKind.VDG: 0.5 * np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]]),
    GateKind.H: _SQ2 * np.array([[1, 1], [1, -1]], dtype=complex),
    GateKind.S: np.diag([1, 1j]),
    GateKind.SDG: np.diag([1, -1j]),
    GateKind.T: np.diag([1, np.exp(1j * math.pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(-1j * math.pi / 4)]),
}


@dataclass(frozen=True)
class Gate:
    """One gate: ``kind`` applied to ``targets`` when every control is |1>.

    ``SWAP`` with one control is a Fredkin gate; ``X`` with two controls is a
    Toffoli. Rotation kinds carry their angle (radians) in ``param``.
    """

    kind: GateKind
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()
    param: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        arity = 2 if self.kind in _TWO_TARGET else 1
        if len(self.targets) != arity:
            raise ValueError(f"{self.kind.value} takes {arity} target(s), got {len(self.targets)}")
        wires = self.controls + self.targets
        if len(set(wires)) != len(wires):
            raise ValueError(f"repeated qubit in {self.kind.value} on {wires}")
        if min(wires) < 0:
            raise ValueError(f"negative qubit index in {wires}")
        if (self.kind in _PARAMETRIC) != (self.param is not None):
            raise ValueError(f"{self.kind.value}: angle is required exactly for rotations")
        if self.param is not None:
            object.__setattr__(self, "param", float(self.param))

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    @property
    def is_classical(self) -> bool:
        """True for permutation gates (MCT and controlled SWAP)."""
        return self.kind in (GateKind.X, GateKind.SWAP)

    def base_matrix(self) -> np.ndarray:
        """Matrix of the uncontrolled target operation (2x2, or 4x4 for SWAP)."""
        if self.kind is GateKind.SWAP:
            return np.array(
                [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
            )
        if self.kind in _PARAMETRIC:
            c, s = math.cos(self.param / 2), math.sin(self.param / 2)
            if self.kind is GateKind.RX:
                return np.array([[c, -1j * s], [-1j * s, c]])
            if self.kind is GateKind.RY:
                return np.array([[c, -s], [s, c]], dtype=complex)
            return np.diag([np.exp(-1j * self.param / 2), np.exp(1j * self.param / 2)])
        return _MATRICES[self.kind]

    def adjoint(self) -> Gate:
        if self.kind in _PARAMETRIC:
            return Gate(self.kind, self.controls, self.targets, -self.param)
        return Gate(_ADJOINT.get(self.kind, self.kind), self.controls, self.targets)

    def relabel(self, mapping: Sequence[int] | dict[int, int]) -> Gate:
        return Gate(
            self.kind,
            tuple(mapping[q] for q in self.controls),
            tuple(mapping[q] for q in self.targets),
            self.param,
        )

    def __str__(self) -> str:
        name = self.kind.value
        if self.kind is GateKind.X and self.controls:
            name = "C" * len(self.controls) + "X" if len(self.controls) < 3 else f"MCX{len(self.controls)}"
        elif self.kind is GateKind.SWAP and self.controls:
            name = "CSWAP" if len(self.controls) == 1 else f"C{len(self.controls)}SWAP"
        elif self.controls:
            name = "C" * len(self.controls) + name
        args = ",".join(map(str, self.qubits))
        if self.param is not None:
            return f"{name}({self.param:.6g})({args})"
        return f"{name}({args})"


# Gate constructors. Controls are given first, the target last.


def x(target: int) -> Gate:
    return Gate(GateKind.X, (), (target,))


def cx(control: int, target: int) -> Gate:
    return Gate(GateKind.X, (control,), (target,))


def ccx(c0: int, c1: int, target: int) -> Gate:
    return Gate(GateKind.X, (c0, c1), (target,))


def mcx(controls: Iterable[int], target: int) -> Gate:
    return Gate(GateKind.X, tuple(controls), (target,))


def swap(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (), (a, b))


def fredkin(control: int, a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (control,), (a, b))


def v(control: int, target: int) -> Gate:
    return Gate(GateKind.V, (control,), (target,))


def vdg(control: int, target: int) -> Gate:
    return Gate(GateKind.VDG, (control,), (target,))


def peres(a: int, b: int, c: int) -> list[Gate]:
    """Peres gate on (a, b, c): ``c ^= a & b`` then ``b ^= a``.

    There is no Peres gate kind; the gate is always stored as this
    Toffoli + CNOT pair.
    """
    return [ccx(a, b, c), cx(a, b)]


def h(q: int) -> Gate:
    return Gate(GateKind.H, (), (q,))


def s(q: int) -> Gate:
    return Gate(GateKind.S, (), (q,))


def sdg(q: int) -> Gate:
    return Gate(GateKind.SDG, (), (q,))


def t(q: int) -> Gate:
    return Gate(GateKind.T, (), (q,))


def tdg(q: int) -> Gate:
    return Gate(GateKind.TDG, (), (q,))


def rx(theta: float, q: int) -> Gate:
    return Gate(GateKind.RX, (), (q,), theta)


def ry(theta: float, q: int) -> Gate:
    return Gate(GateKind.RY, (), (q,), theta)


def rz(theta: float, q: int) -> Gate:
    return Gate(GateKind.RZ, (), (q,), theta)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 0:
            raise ValueError("num_qubits must be non-negative")
        for g in self.gates:
            if max(g.qubits) >= self.num_qubits:
                raise ValueError(f"{g} references a qubit outside [0, {self.num_qubits})")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.num_qubits != self.num_qubits:
            raise ValueError("cannot concatenate circuits of different width")
        return Circuit(self.num_qubits, self.gates + other.gates, self.name)

    @property
    def is_classical(self) -> bool:
        return all(g.is_classical for g in self.gates)

    @property
    def depth(self) -> int:
        return len(layers(self))

    def relabel(self, mapping: Sequence[int] | dict[int, int], num_qubits: int | None = None) -> Circuit:
        width = self.num_qubits if num_qubits is None else num_qubits
        return Circuit(width, tuple(g.relabel(mapping) for g in self.gates), self.name)

    def __str__(self) -> str:
        body = " ".join(str(g) for g in self.gates)
        return f"Circuit({self.name or '-'}, m={self.num_qubits}: {body})"


def layer_index(circuit: Circuit) -> list[int]:
    """ASAP layer (0-based) of every gate, in gate order."""
    frontier = [0] * circuit.num_qubits
    out = []
    for g in circuit.gates:
        level = max(frontier[q] for q in g.qubits)
        out.append(level)
        for q in g.qubits:
            frontier[q] = level + 1
    return out


def layers(circuit: Circuit) -> list[list[Gate]]:
    """ASAP greedy packing of the gates into layers of disjoint support."""
    idx = layer_index(circuit)
    out: list[list[Gate]] = [[] for _ in range(max(idx, default=-1) + 1)]
    for g, i in zip(circuit.gates, idx):
        out[i].append(g)
    return out


def inverse(circuit: Circuit) -> Circuit:
    return Circuit(
        circuit.num_qubits,
        tuple(g.adjoint() for g in reversed(circuit.gates)),
        circuit.name,
    )


@dataclass(frozen=True)
class QubitBlock:
    block_id: int
    qubits: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", frozenset(self.qubits))
        if not self.qubits:
            raise ValueError("a qubit block must hold at least one qubit")

    @property
    def size(self) -> int:
        return len(self.qubits)

    def sorted(self) -> list[int]:
        return sorted(self.qubits)


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller index as root so block ids are stable
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def interaction_components(circuit: Circuit) -> list[QubitBlock]:
    """Connected components of the multi-qubit-gate interaction graph.

    Blocks are returned ordered by their smallest qubit, with ``block_id``
    equal to that position.
    """
    uf = _UnionFind(circuit.num_qubits)
    for g in circuit.gates:
        first, *rest = g.qubits
        for q in rest:
            uf.union(first, q)
    groups: dict[int, set[int]] = {}
    for q in range(circuit.num_qubits):
        groups.setdefault(uf.find(q), set()).add(q)
    ordered = sorted(groups.values(), key=min)
    return [QubitBlock(i, frozenset(qs)) for i, qs in enumerate(ordered)]


def subcircuit(circuit: Circuit, qubits: Iterable[int]) -> Circuit:
    """Gates of ``circuit`` whose support lies inside ``qubits``, same width."""
    keep = set(qubits)
    return Circuit(
        circuit.num_qubits,
        tuple(g for g in circuit.gates if set(g.qubits) <= keep),
        circuit.name,
    )


def random_mct_circuit(
    num_qubits: int,
    num_gates: int,
    seed: int,
    max_controls: int = 2,
    fredkin_prob: float = 0.0,
    name: str = "",
) -> Circuit:
    """Seeded random circuit of multi-controlled X (and optionally Fredkin) gates."""
    rng = np.random.default_rng(seed)
    gates = []
    for _ in range(num_gates):
        if num_qubits >= 3 and rng.random() < fredkin_prob:
            c, a, b = rng.choice(num_qubits, 3, replace=False)
            gates.append(fredkin(int(c), int(a), int(b)))
            continue
        nc = int(rng.integers(0, min(max_controls, num_qubits - 1) + 1))
        wires = rng.choice(num_qubits, nc + 1, replace=False)
        gates.append(mcx([int(w) for w in wires[:-1]], int(wires[-1])))
    return Circuit(num_qubits, tuple(gates), name or f"mct{num_qubits}_{seed}")
