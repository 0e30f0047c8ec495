"""Split compilation: cut a circuit at a layer boundary and hide the wiring.

Convention used throughout the package: Split-1 output wire ``j`` feeds the
Split-2 input wire ``pi[j]``. Split 2 is published on its own wire labels,
so the attacker sees both gate lists but not ``pi``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind, layer_index


@dataclass(frozen=True)
class HiddenMapping:
    pi: tuple[int, ...]

    def __post_init__(self) -> None:
        pi = tuple(int(p) for p in self.pi)
        if sorted(pi) != list(range(len(pi))):
            raise ValueError(f"mapping {pi} is not a bijection on [0, {len(pi)})")
        object.__setattr__(self, "pi", pi)

    @classmethod
    def identity(cls, m: int) -> HiddenMapping:
        return cls(tuple(range(m)))

    @classmethod
    def random(cls, m: int, seed: int | None) -> HiddenMapping:
        return cls(tuple(np.random.default_rng(seed).permutation(m).tolist()))

    def __len__(self) -> int:
        return len(self.pi)

    def __getitem__(self, j: int) -> int:
        return self.pi[j]

    def inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self.pi)
        for j, p in enumerate(self.pi):
            inv[p] = j
        return tuple(inv)


@dataclass(frozen=True)
class PublicView:
    """What the attacker is given: both gate lists and the qubit count."""

    split1: Circuit
    split2: Circuit

    def __post_init__(self) -> None:
        if self.split1.num_qubits != self.split2.num_qubits:
            raise ValueError("split circuits disagree on the number of qubits")

    @property
    def num_qubits(self) -> int:
        return self.split1.num_qubits


@dataclass(frozen=True)
class SplitInstance:
    split1: Circuit
    split2: Circuit
    hidden: HiddenMapping
    n: int
    source_name: str = ""

    @property
    def num_qubits(self) -> int:
        return self.split1.num_qubits

    @property
    def public(self) -> PublicView:
        return PublicView(self.split1, self.split2)

    def to_json(self) -> dict[str, Any]:
        return {
            "public": {
                "source_name": self.source_name,
                "num_qubits": self.num_qubits,
                "n": self.n,
                "split1": [gate_to_json(g) for g in self.split1.gates],
                "split2": [gate_to_json(g) for g in self.split2.gates],
            },
            "secret": {"pi": list(self.hidden.pi)},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> SplitInstance:
        pub = doc["public"]
        m = int(pub["num_qubits"])
        name = pub.get("source_name", "")
        return cls(
            split1=Circuit(m, tuple(gate_from_json(g) for g in pub["split1"]), name),
            split2=Circuit(m, tuple(gate_from_json(g) for g in pub["split2"]), name),
            hidden=HiddenMapping(tuple(doc["secret"]["pi"])),
            n=int(pub["n"]),
            source_name=name,
        )

    @classmethod
    def loads(cls, text: str) -> SplitInstance:
        return cls.from_json(json.loads(text))


def public_from_json(doc: dict[str, Any]) -> PublicView:
    """Attacker-side loader: reads only the ``public`` part of a document."""
    pub = doc["public"]
    m = int(pub["num_qubits"])
    return PublicView(
        Circuit(m, tuple(gate_from_json(g) for g in pub["split1"])),
        Circuit(m, tuple(gate_from_json(g) for g in pub["split2"])),
    )


def gate_to_json(g: Gate) -> dict[str, Any]:
    return {"kind": g.kind.value, "controls": list(g.controls), "targets": list(g.targets), "param": g.param}


def gate_from_json(d: dict[str, Any]) -> Gate:
    return Gate(GateKind(d["kind"]), tuple(d["controls"]), tuple(d["targets"]), d.get("param"))


def split(
    circuit: Circuit,
    n: int,
    seed: int | None = None,
    mapping: HiddenMapping | Sequence[int] | None = None,
) -> SplitInstance:
    """Put the last ``n`` ASAP layers in Split 2 behind a random wire permutation.

    ``mapping`` overrides the seeded permutation.
    """
    idx = layer_index(circuit)
    depth = max(idx, default=-1) + 1
    if depth < 2:
        raise ValueError(f"circuit {circuit.name!r} has {depth} layer(s); need at least 2 to split")
    if not 1 <= n <= depth - 1:
        raise ValueError(f"n={n} outside [1, {depth - 1}] for a {depth}-layer circuit")
    m = circuit.num_qubits
    if mapping is None:
        hidden = HiddenMapping.random(m, seed)
    else:
        hidden = mapping if isinstance(mapping, HiddenMapping) else HiddenMapping(tuple(mapping))
    if len(hidden) != m:
        raise ValueError("mapping size does not match the circuit")
    cut = depth - n
    # gates keep their original relative order inside each split
    first = tuple(g for g, i in zip(circuit.gates, idx) if i < cut)
    second = tuple(g.relabel(hidden.pi) for g, i in zip(circuit.gates, idx) if i >= cut)
    return SplitInstance(
        split1=Circuit(m, first, circuit.name),
        split2=Circuit(m, second, circuit.name),
        hidden=hidden,
        n=n,
        source_name=circuit.name,
    )


def recombine(split1: Circuit, mapping: HiddenMapping | Sequence[int], split2: Circuit) -> Circuit:
    """Single circuit on Split-1 labels: Split 1, then Split 2 pulled back through the mapping."""
    if split1.num_qubits != split2.num_qubits:
        raise ValueError("split circuits disagree on the number of qubits")
    if not isinstance(mapping, HiddenMapping):
        mapping = HiddenMapping(tuple(mapping))
    if len(mapping) != split1.num_qubits:
        raise ValueError("mapping size does not match the circuits")
    back = mapping.inverse()
    return Circuit(
        split1.num_qubits,
        split1.gates + tuple(g.relabel(back) for g in split2.gates),
        split1.name,
    )
