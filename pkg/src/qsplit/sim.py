"""Exact statevector simulation and the state comparisons used by the attack.

States are stored as flat complex vectors of length ``2**m``; qubit 0 is the
most significant bit of the index (leftmost character of a basis label).
Reduced states keep a reference to the pure state they came from, so that
fidelities between two reductions of large states can be computed from the
purifications without building the full density matrices.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind, inverse

ATOL = 1e-8


@dataclass(frozen=True)
class PureState:
    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.num_qubits:
            raise ValueError(f"expected {2**self.num_qubits} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > ATOL:
            raise ValueError(f"state is not normalized (norm {norm:.3g})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, bits: str | Sequence[int]) -> PureState:
        """Computational basis state from a label such as ``"101"``."""
        bits = [int(b) for b in bits]
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[bits_to_index(bits)] = 1
        return cls(len(bits), amps)

    @classmethod
    def zero(cls, num_qubits: int) -> PureState:
        return cls.basis([0] * num_qubits)

    @classmethod
    def product(cls, qubit_states: Sequence[np.ndarray]) -> PureState:
        amps = np.ones(1, dtype=complex)
        for psi in qubit_states:
            amps = np.kron(amps, np.asarray(psi, dtype=complex))
        return cls(len(qubit_states), amps / np.linalg.norm(amps))

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def permuted(self, mapping: Sequence[int]) -> PureState:
        """Move the content of wire ``j`` to wire ``mapping[j]``."""
        m = self.num_qubits
        axes = [0] * m
        for j, dest in enumerate(mapping):
            axes[dest] = j
        return PureState(m, np.transpose(self.tensor, axes).reshape(-1))

    def digest(self) -> str:
        rounded = np.round(self.amplitudes, 10) + (0.0 + 0.0j)
        return hashlib.sha256(rounded.tobytes()).hexdigest()[:16]

    def label(self) -> str | None:
        """Basis label if this is (up to phase) a computational basis state."""
        probs = self.probabilities()
        i = int(np.argmax(probs))
        if abs(probs[i] - 1) > ATOL:
            return None
        return index_to_bits(i, self.num_qubits)


def bits_to_index(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def index_to_bits(index: int, num_qubits: int) -> str:
    return format(index, f"0{num_qubits}b") if num_qubits else ""


def _apply_gate(psi: np.ndarray, gate: Gate, m: int) -> None:
    """Apply ``gate`` in place to a tensor of shape (2,)*m [+ (batch,)]."""
    base = [slice(None)] * psi.ndim
    for c in gate.controls:
        base[c] = 1
    if gate.kind is GateKind.SWAP:
        a, b = gate.targets
        i01, i10 = list(base), list(base)
        i01[a], i01[b] = 0, 1
        i10[a], i10[b] = 1, 0
        i01, i10 = tuple(i01), tuple(i10)
        tmp = psi[i01].copy()
        psi[i01] = psi[i10]
        psi[i10] = tmp
        return
    (tgt,) = gate.targets
    i0, i1 = list(base), list(base)
    i0[tgt], i1[tgt] = 0, 1
    i0, i1 = tuple(i0), tuple(i1)
    if gate.kind is GateKind.X:
        tmp = psi[i0].copy()
        psi[i0] = psi[i1]
        psi[i1] = tmp
        return
    u = gate.base_matrix()
    a0, a1 = psi[i0].copy(), psi[i1].copy()
    psi[i0] = u[0, 0] * a0 + u[0, 1] * a1
    psi[i1] = u[1, 0] * a0 + u[1, 1] * a1


def _run(circuit: Circuit, tensor: np.ndarray) -> np.ndarray:
    for g in circuit.gates:
        _apply_gate(tensor, g, circuit.num_qubits)
    return tensor


def apply(circuit: Circuit, state: PureState) -> PureState:
    if state.num_qubits != circuit.num_qubits:
        raise ValueError(
            f"state has {state.num_qubits} qubits, circuit has {circuit.num_qubits}"
        )
    psi = np.array(state.tensor, copy=True)
    return PureState(state.num_qubits, _run(circuit, psi).reshape(-1))


def apply_inverse(circuit: Circuit, state: PureState) -> PureState:
    return apply(inverse(circuit), state)


def unitary(circuit: Circuit) -> np.ndarray:
    """Dense ``2**m x 2**m`` matrix of the circuit (column j = image of |j>)."""
    m = circuit.num_qubits
    dim = 2**m
    psi = np.eye(dim, dtype=complex).reshape((2,) * m + (dim,))
    return _run(circuit, psi).reshape(dim, dim)


def _basis_columns(m: int, lo: int, hi: int) -> np.ndarray:
    cols = np.zeros((2**m, hi - lo), dtype=complex)
    cols[np.arange(lo, hi), np.arange(hi - lo)] = 1.0
    return cols.reshape((2,) * m + (hi - lo,))


def basis_fidelities(a: Circuit, b: Circuit) -> np.ndarray:
    """|<j|A^dag B|j>|^2 for every basis state j.

    Classical-reversible pairs compare permutation tables; otherwise the basis
    columns are simulated in chunks of about 2**20 amplitudes.
    """
    if a.num_qubits != b.num_qubits:
        raise ValueError("circuits disagree on the number of qubits")
    m = a.num_qubits
    dim = 2**m
    if a.is_classical and b.is_classical:
        return (permutation_table(a) == permutation_table(b)).astype(float)
    chunk = max(1, 2**20 >> m)
    out = np.empty(dim)
    for lo in range(0, dim, chunk):
        hi = min(lo + chunk, dim)
        ua, ub = (_run(c, _basis_columns(m, lo, hi)).reshape(dim, -1) for c in (a, b))
        out[lo:hi] = np.abs(np.einsum("ij,ij->j", ua.conj(), ub)) ** 2
    return out


def equivalent_on_basis(a: Circuit, b: Circuit, tol: float = 1e-8) -> bool:
    """True iff A and B map every basis state to the same state up to phase."""
    return bool(np.all(basis_fidelities(a, b) >= 1 - tol))


def permutation_table(circuit: Circuit) -> np.ndarray:
    """Basis-state map of a classical-reversible circuit: out[i] = image of |i>."""
    if not circuit.is_classical:
        raise ValueError("permutation_table needs a circuit of MCT/SWAP gates only")
    m = circuit.num_qubits
    idx = np.arange(2**m)
    bits = (idx[:, None] >> (m - 1 - np.arange(m))) & 1
    for g in circuit.gates:
        on = np.all(bits[:, list(g.controls)] == 1, axis=1) if g.controls else np.ones(len(bits), bool)
        if g.kind is GateKind.X:
            bits[on, g.targets[0]] ^= 1
        else:
            a, b = g.targets
            tmp = bits[on, a].copy()
            bits[on, a] = bits[on, b]
            bits[on, b] = tmp
    return (bits << (m - 1 - np.arange(m))).sum(axis=1)


def fidelity_pure(a: PureState, b: PureState) -> float:
    if a.num_qubits != b.num_qubits:
        raise ValueError("fidelity of states with different qubit counts")
    return float(min(1.0, abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2))


class ReducedState:
    """Density matrix of ``state`` on the qubits in ``qubits`` (sorted).

    Built either from a pure state (kept as a purification, the matrix is
    formed lazily) or directly from a density matrix.
    """

    def __init__(
        self,
        qubits: Iterable[int],
        matrix: np.ndarray | None = None,
        purification: PureState | None = None,
    ):
        self.qubits = tuple(sorted(qubits))
        if (matrix is None) == (purification is None):
            raise ValueError("give exactly one of matrix or purification")
        self.purification = purification
        if matrix is not None:
            matrix = np.asarray(matrix, dtype=complex)
            dim = 2 ** len(self.qubits)
            if matrix.shape != (dim, dim):
                raise ValueError(f"density matrix must be {dim}x{dim}")
            self.__dict__["matrix"] = matrix

    def _split(self) -> np.ndarray:
        """Purification reshaped to (kept, traced) amplitude matrix."""
        psi = self.purification
        m = psi.num_qubits
        traced = [q for q in range(m) if q not in self.qubits]
        t = np.transpose(psi.tensor, list(self.qubits) + traced)
        return t.reshape(2 ** len(self.qubits), 2 ** len(traced))

    @cached_property
    def matrix(self) -> np.ndarray:
        a = self._split()
        return a @ a.conj().T

    @property
    def num_traced(self) -> int:
        return 0 if self.purification is None else self.purification.num_qubits - len(self.qubits)

    def probabilities(self) -> np.ndarray:
        """Diagonal of the density matrix (basis-outcome distribution)."""
        if "matrix" in self.__dict__ or self.purification is None:
            return np.real(np.diag(self.matrix)).copy()
        return np.sum(np.abs(self._split()) ** 2, axis=1)


def reduced(state: PureState, keep: Iterable[int]) -> ReducedState:
    keep = sorted(set(keep))
    if any(q < 0 or q >= state.num_qubits for q in keep):
        raise ValueError(f"qubits {keep} outside [0, {state.num_qubits})")
    return ReducedState(keep, purification=state)


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    return (vecs * np.sqrt(np.clip(w, 0, None))) @ vecs.conj().T


def fidelity_mixed(a: ReducedState, b: ReducedState) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(a) b sqrt(a)))**2``.

    When both states carry purifications over the same traced qubits the
    value is computed as the squared trace norm of the overlap of the two
    purifications on the traced side, which needs only a matrix of the
    smaller of the two subsystem dimensions.
    """
    if a.qubits != b.qubits:
        raise ValueError(f"reduced states on different qubits: {a.qubits} vs {b.qubits}")
    pa, pb = a.purification, b.purification
    if (
        pa is not None
        and pb is not None
        and pa.num_qubits == pb.num_qubits
        and a.num_traced <= len(a.qubits)
    ):
        overlap = a._split().conj().T @ b._split()
        f = np.sum(np.linalg.svd(overlap, compute_uv=False)) ** 2
    else:
        ra = _psd_sqrt(a.matrix)
        w = np.linalg.eigvalsh(ra @ b.matrix @ ra)
        f = np.sum(np.sqrt(np.clip(w, 0, None))) ** 2
    return float(min(1.0, max(0.0, f)))


@dataclass(frozen=True)
class SampleCounts:
    shots: int
    counts: Mapping[str, int]

    def __post_init__(self) -> None:
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to shots")

    def frequency(self, label: str) -> float:
        return self.counts.get(label, 0) / self.shots


def sample(state: PureState, shots: int, seed: int | np.random.Generator | None = None) -> SampleCounts:
    if shots < 1:
        raise ValueError("shots must be at least 1")
    rng = np.random.default_rng(seed)
    probs = state.probabilities()
    drawn = rng.multinomial(shots, probs / probs.sum())
    counts = {
        index_to_bits(int(i), state.num_qubits): int(c) for i, c in enumerate(drawn) if c
    }
    return SampleCounts(shots, counts)
