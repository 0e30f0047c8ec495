"""Oracle-guided recovery of the hidden wiring between Split 1 and Split 2.

The hierarchical attack works block by block. Split 2 is cut into
entanglement blocks (connected components of its interaction graph), taken in
ascending size. For each block it

1. enumerates candidate sets of unassigned Split-1 wires and tests each with a
   sensitization pair: two boundary states that differ exactly on the
   candidate set, pulled back through the inverse of Split 1 and sent to the
   oracle. The candidate is right iff the two outputs agree outside the block.
2. finds the wire-to-wire bijection of the accepted set by walking the
   permutations in lexicographic order and checking each against fresh oracle
   queries, until a single consistent permutation is left.

:func:`brute_force` is the exhaustive baseline over all ``m!`` wirings.
"""
from __future__ import annotations

import enum
import itertools
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, QubitBlock, interaction_components, subcircuit
from .oracle import BudgetExhausted, Oracle, TimeLimitExceeded
from .sim import PureState, apply, apply_inverse, fidelity_mixed, fidelity_pure, reduced
from .split import PublicView


class Outcome(str, enum.Enum):
    RECOVERED = "recovered"
    TIMEOUT = "timeout"
    BUDGET_EXHAUSTED = "budget_exhausted"
    FAILED = "failed"


class BlockStatus(str, enum.Enum):
    UNTESTED = "untested"
    SET_CONFIRMED = "set_confirmed"
    FULLY_MAPPED = "fully_mapped"
    EXHAUSTED = "exhausted"


class AllPermutationsRejected(RuntimeError):
    """Every bijection of a confirmed candidate set was refuted by the oracle."""


@dataclass(frozen=True)
class AttackConfig:
    epsilon: float = 0.03
    repeats: int = 1
    check_inputs: int = 1
    input_distribution: str = "random_basis"
    backtracking: bool = True
    seed: int = 0
    # skip permutations already refuted by an earlier observation of the block
    reuse_observations: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.repeats < 1 or self.check_inputs < 1:
            raise ValueError("repeats and check_inputs must be at least 1")
        if self.input_distribution not in ("random_basis", "random_product"):
            raise ValueError(f"unknown input distribution {self.input_distribution!r}")


@dataclass
class BlockAssignment:
    block: QubitBlock
    candidate: frozenset[int]
    permutation: dict[int, int] | None = None
    status: BlockStatus = BlockStatus.UNTESTED


@dataclass
class RecoveredMapping:
    pi_hat: tuple[int, ...] | None
    per_block: list[BlockAssignment]
    queries_used: int
    outcome: Outcome
    trace: list[dict] = field(default_factory=list)
    wall_s: float = 0.0

    @property
    def t(self) -> int:
        return self.queries_used

    @property
    def recovered(self) -> bool:
        return self.outcome is Outcome.RECOVERED

    def partial_mapping(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for ba in self.per_block:
            if ba.permutation:
                out.update(ba.permutation)
        return out

    def write_trace(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for event in self.trace:
                fh.write(json.dumps(event) + "\n")


@dataclass(frozen=True)
class SensitizationPair:
    inputs: tuple[PureState, PureState]
    targets: tuple[PureState, PureState]
    candidate: frozenset[int]


def sensitization_pair(
    split1: Circuit,
    candidate: Iterable[int],
    assigned: Iterable[int] = (),
    seed: int | None = None,
) -> SensitizationPair:
    """Boundary basis states equal off ``candidate`` and complementary on it.

    Without a seed the shared background is all zeros and the candidate bits
    go 0 -> 1; with a seed both are drawn at random.
    """
    cand = frozenset(candidate)
    if not cand:
        raise ValueError("candidate set is empty")
    overlap = cand & set(assigned)
    if overlap:
        raise ValueError(f"candidate overlaps assigned qubits {sorted(overlap)}")
    m = split1.num_qubits
    if seed is None:
        phi = [0] * m
    else:
        phi = np.random.default_rng(seed).integers(0, 2, m).tolist()
    phi2 = [1 - bit if q in cand else bit for q, bit in enumerate(phi)]
    targets = (PureState.basis(phi), PureState.basis(phi2))
    inputs = (apply_inverse(split1, targets[0]), apply_inverse(split1, targets[1]))
    return SensitizationPair(inputs, targets, cand)


def block_candidate_fidelity(oracle: Oracle, block: QubitBlock, pair: SensitizationPair) -> float:
    """Query both inputs of ``pair`` and compare the outputs off the block."""
    out1 = oracle.query_state(pair.inputs[0])
    out2 = oracle.query_state(pair.inputs[1])
    rest = [q for q in range(oracle.num_qubits) if q not in block.qubits]
    return fidelity_mixed(reduced(out1, rest), reduced(out2, rest))


def test_block_candidate(
    oracle: Oracle,
    split2: Circuit,
    block: QubitBlock,
    pair: SensitizationPair,
    epsilon: float = 0.03,
) -> bool:
    if len(pair.candidate) != block.size:
        raise ValueError("candidate set and block differ in size")
    if split2.num_qubits != oracle.num_qubits:
        raise ValueError("Split 2 and oracle disagree on the number of qubits")
    return block_candidate_fidelity(oracle, block, pair) >= 1 - epsilon


# Permutation pruning -------------------------------------------------------
#
# A permutation is a tuple ``perm`` with ``perm[i]`` the Split-2 wire fed by
# ``A[i]`` (A sorted). For a boundary state x the simulated block output is
# U|x permuted>, U being the block's gates; its fidelity with the oracle's
# reduced output rho equals <x permuted| U^dag rho U |x permuted>, so each
# observation is stored pulled back through U^dag once and every permutation
# is scored against it without re-simulating.


def _random_qubit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


class _Observations:
    def __init__(self, A: Sequence[int], B: Sequence[int], epsilon: float):
        self.A, self.B = list(A), list(B)
        self.epsilon = epsilon

    def lex_permutations(self):
        return itertools.permutations(self.B)


class _BasisObservations(_Observations):
    """Observations from computational-basis boundary states.

    Each observation yields the block-input basis state z with
    <z|U^dag rho U|z> >= 1 - eps (at most one such z exists because the
    weights sum to 1), or refutes every permutation when there is none.
    A permutation is consistent iff every Split-1 wire a is sent to a wire l
    whose observed bits always equal a's boundary bits, tracked here as a
    boolean compatibility matrix.
    """

    def __init__(self, A, B, epsilon):
        super().__init__(A, B, epsilon)
        self.compat = np.ones((len(self.A), len(self.B)), dtype=bool)
        self.pos = {l: j for j, l in enumerate(self.B)}
        self.dead = False

    def add(self, boundary_bits: Sequence[int], pulled: PureState) -> None:
        probs = reduced(pulled, self.B).probabilities()
        z = int(np.argmax(probs))
        if probs[z] < 1 - self.epsilon:
            self.dead = True
            return
        b = len(self.B)
        xbits = np.array([int(boundary_bits[a]) for a in self.A])
        zbits = (z >> (b - 1 - np.arange(b))) & 1
        self.compat &= xbits[:, None] == zbits[None, :]

    def consistent(self, perm: Sequence[int]) -> bool:
        if self.dead:
            return False
        return all(self.compat[i, self.pos[l]] for i, l in enumerate(perm))

    def first_consistent(self, after: Sequence[int] | None = None) -> tuple[int, ...] | None:
        if self.dead:
            return None
        free = np.ones(len(self.B), dtype=bool)
        out = []
        for i in range(len(self.A)):
            hits = np.flatnonzero(self.compat[i] & free)
            if hits.size == 0:
                return None
            free[hits[0]] = False
            out.append(self.B[hits[0]])
        return tuple(out)

    def rival(self, perm: Sequence[int]) -> tuple[int, ...] | None:
        cols = [self.pos[l] for l in perm]
        for i, j in itertools.combinations(range(len(perm)), 2):
            if self.compat[i, cols[j]] and self.compat[j, cols[i]]:
                other = list(perm)
                other[i], other[j] = other[j], other[i]
                return tuple(other)
        return None

    def survivors(self) -> int:
        """Number of permutations consistent with every observation."""
        if self.dead:
            return 0
        rows = [tuple(r) for r in self.compat]
        sizes: dict[tuple, int] = {}
        for r in rows:
            sizes[r] = sizes.get(r, 0) + 1
        if any(sum(r) != c for r, c in sizes.items()):
            return 0
        return math.prod(math.factorial(c) for c in sizes.values())

    def draw(self, rng: np.random.Generator, m: int, perm=None, rival=None) -> tuple[list[int], PureState]:
        bits = rng.integers(0, 2, m).tolist()
        if perm is not None and rival is not None:
            i = next(i for i in range(len(perm)) if perm[i] != rival[i])
            j = perm.index(rival[i])
            bits[self.A[i]] = 1 - bits[self.A[j]]
        return bits, PureState.basis(bits)


class _ProductObservations(_Observations):
    """Observations from random product boundary states (explicit scoring)."""

    def __init__(self, A, B, epsilon):
        super().__init__(A, B, epsilon)
        self.obs: list[tuple[list[np.ndarray], PureState]] = []

    def add(self, qubit_states: list[np.ndarray], pulled: PureState) -> None:
        self.obs.append((qubit_states, pulled))

    def score(self, perm: Sequence[int], qubit_states, pulled: PureState) -> float:
        t = pulled.tensor
        local = {l: qubit_states[a] for a, l in zip(self.A, perm)}
        for l in sorted(local, reverse=True):
            t = np.tensordot(t, local[l].conj(), axes=([l], [0]))
        return float(np.sum(np.abs(t) ** 2))

    def consistent(self, perm: Sequence[int]) -> bool:
        return all(self.score(perm, qs, pulled) >= 1 - self.epsilon for qs, pulled in self.obs)

    def first_consistent(self, after: Sequence[int] | None = None) -> tuple[int, ...] | None:
        it = self.lex_permutations()
        if after is not None:
            it = itertools.dropwhile(lambda p: p != tuple(after), it)
            next(it, None)
        return next((p for p in it if self.consistent(p)), None)

    def rival(self, perm: Sequence[int]) -> tuple[int, ...] | None:
        perm = tuple(perm)
        return next((p for p in self.lex_permutations() if p != perm and self.consistent(p)), None)

    def draw(self, rng: np.random.Generator, m: int, perm=None, rival=None):
        states = [_random_qubit(rng) for _ in range(m)]
        return states, PureState.product(states)


def _observe(oracle, split1, block_gates, boundary: PureState) -> PureState:
    out = oracle.query_state(apply_inverse(split1, boundary))
    return apply_inverse(block_gates, out)


def prune_permutations(
    oracle: Oracle,
    split1: Circuit,
    split2: Circuit,
    block: QubitBlock,
    candidate: Iterable[int],
    partial: dict[int, int] | None = None,
    config: AttackConfig = AttackConfig(),
    rng: np.random.Generator | None = None,
) -> dict[int, int]:
    """Bijection from the confirmed Split-1 set onto the block's wires.

    Permutations are tried in lexicographic order, each against
    ``config.check_inputs`` fresh oracle queries. A permutation that survives
    is only accepted once every other permutation consistent with the
    observations so far has been ruled out by a distinguishing query.
    """
    A, B = sorted(candidate), block.sorted()
    if len(A) != len(B):
        raise ValueError("candidate set and block differ in size")
    if partial and set(partial) & set(A):
        raise ValueError("candidate overlaps already mapped qubits")
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    m = oracle.num_qubits
    block_gates = subcircuit(split2, B)
    kind = _BasisObservations if config.input_distribution == "random_basis" else _ProductObservations
    book = kind(A, B, config.epsilon)

    def query(perm=None, rival=None) -> None:
        raw, boundary = book.draw(rng, m, perm, rival)
        book.add(raw, _observe(oracle, split1, block_gates, boundary))

    def confirmed(perm) -> bool:
        while book.consistent(perm):
            rival = book.rival(perm)
            if rival is None:
                return True
            query(perm, rival)
        return False

    if config.reuse_observations:
        perm = book.first_consistent()
        while perm is not None:
            for _ in range(config.check_inputs):
                query()
                if not book.consistent(perm):
                    break
            if confirmed(perm):
                return dict(zip(A, perm))
            perm = book.first_consistent(after=perm)
    else:
        for perm in book.lex_permutations():
            for _ in range(config.check_inputs):
                query()
            if confirmed(perm):
                return dict(zip(A, perm))
    raise AllPermutationsRejected(f"no bijection of {A} onto block {B} matches the oracle")


# Recovery ------------------------------------------------------------------


def _ordered_blocks(split2: Circuit) -> list[QubitBlock]:
    return sorted(interaction_components(split2), key=lambda blk: (blk.size, min(blk.qubits)))


def recover(public: PublicView, oracle: Oracle, config: AttackConfig = AttackConfig()) -> RecoveredMapping:
    split1, split2 = public.split1, public.split2
    m = public.num_qubits
    if oracle.num_qubits != m:
        raise ValueError("oracle and public view disagree on the number of qubits")
    rng = np.random.default_rng(config.seed)
    eps = config.epsilon
    ledger = oracle.ledger
    started = time.monotonic()
    blocks = _ordered_blocks(split2)
    trace: list[dict] = []
    done: list[BlockAssignment] = []
    resume = [0] * len(blocks)
    assigned: set[int] = set()

    def event(block, cand, decision, **extra):
        trace.append(
            {"block": block.block_id, "block_qubits": block.sorted(), "candidate": sorted(cand),
             "decision": decision, "t": ledger.t, **extra}
        )

    def finish(outcome: Outcome) -> RecoveredMapping:
        pi_hat = None
        if outcome is Outcome.RECOVERED:
            mapping = {}
            for ba in done:
                mapping.update(ba.permutation)
            pi_hat = tuple(mapping[j] for j in range(m))
        return RecoveredMapping(pi_hat, done, ledger.t, outcome, trace, time.monotonic() - started)

    i = 0
    try:
        while i < len(blocks):
            block = blocks[i]
            unassigned = [q for q in range(m) if q not in assigned]
            accepted = None
            combos = itertools.combinations(unassigned, block.size)
            for ci, cand in enumerate(itertools.islice(combos, resume[i], None), start=resume[i]):
                if ledger.time_limit is not None and ledger.elapsed() > ledger.time_limit:
                    raise TimeLimitExceeded("time limit exceeded", ledger.t)
                ok = True
                for rep in range(config.repeats):
                    seed = None if rep == 0 else int(rng.integers(2**31))
                    pair = sensitization_pair(split1, cand, assigned, seed)
                    if not test_block_candidate(oracle, split2, block, pair, eps):
                        ok = False
                        break
                event(block, cand, "set_confirmed" if ok else "set_rejected")
                if not ok:
                    continue
                partial = {a: l for ba in done for a, l in ba.permutation.items()}
                try:
                    perm = prune_permutations(oracle, split1, split2, block, cand, partial, config, rng)
                except AllPermutationsRejected:
                    event(block, cand, "permutations_rejected")
                    if not config.backtracking:
                        return finish(Outcome.FAILED)
                    continue
                event(block, cand, "fully_mapped", permutation={str(a): l for a, l in perm.items()})
                accepted = (ci, cand, perm)
                break
            if accepted is not None:
                ci, cand, perm = accepted
                resume[i] = ci + 1
                done.append(BlockAssignment(block, frozenset(cand), perm, BlockStatus.FULLY_MAPPED))
                assigned.update(cand)
                i += 1
                if i < len(blocks):
                    resume[i] = 0
                continue
            event(block, (), "exhausted")
            if not config.backtracking or not done:
                return finish(Outcome.FAILED)
            prev = done.pop()
            assigned.difference_update(prev.candidate)
            i -= 1
    except BudgetExhausted:
        return finish(Outcome.BUDGET_EXHAUSTED)
    except TimeLimitExceeded:
        return finish(Outcome.TIMEOUT)
    return finish(Outcome.RECOVERED)


def brute_force(public: PublicView, oracle: Oracle, config: AttackConfig = AttackConfig()) -> RecoveredMapping:
    """Try all ``m!`` wirings in lexicographic order, one fresh query each."""
    split1, split2 = public.split1, public.split2
    m = public.num_qubits
    rng = np.random.default_rng(config.seed)
    ledger = oracle.ledger
    started = time.monotonic()
    trace: list[dict] = []

    def draw() -> PureState:
        if config.input_distribution == "random_basis":
            return PureState.basis(rng.integers(0, 2, m).tolist())
        return PureState.product([_random_qubit(rng) for _ in range(m)])

    def matches(sigma) -> bool:
        boundary = draw()
        out = oracle.query_state(apply_inverse(split1, boundary))
        predicted = apply(split2, boundary.permuted(sigma))
        return fidelity_pure(out, predicted) >= 1 - config.epsilon

    try:
        for sigma in itertools.permutations(range(m)):
            if ledger.time_limit is not None and ledger.elapsed() > ledger.time_limit:
                raise TimeLimitExceeded("time limit exceeded", ledger.t)
            ok = matches(sigma) and all(matches(sigma) for _ in range(config.check_inputs))
            trace.append({"mapping": list(sigma), "decision": "accepted" if ok else "rejected", "t": ledger.t})
            if ok:
                return RecoveredMapping(tuple(sigma), [], ledger.t, Outcome.RECOVERED, trace,
                                        time.monotonic() - started)
    except BudgetExhausted:
        return RecoveredMapping(None, [], ledger.t, Outcome.BUDGET_EXHAUSTED, trace, time.monotonic() - started)
    except TimeLimitExceeded:
        return RecoveredMapping(None, [], ledger.t, Outcome.TIMEOUT, trace, time.monotonic() - started)
    return RecoveredMapping(None, [], ledger.t, Outcome.FAILED, trace, time.monotonic() - started)


def query_upper_bound(
    blocks: Iterable[QubitBlock] | Iterable[Iterable[int]],
    m: int,
    repeats: int = 1,
    check_inputs: int = 1,
) -> int:
    """Worst-case query count of :func:`recover` for this block structure.

    Sum over blocks, in ascending-size order, of
    ``2*repeats*C(u, b) + check_inputs*b!`` with ``u`` the number of Split-1
    wires still unassigned when the block is reached.
    """
    sets = [frozenset(blk.qubits if isinstance(blk, QubitBlock) else blk) for blk in blocks]
    union = set().union(*sets) if sets else set()
    if sum(len(s) for s in sets) != m or union != set(range(m)) or any(not s for s in sets):
        raise ValueError("blocks do not partition the qubits")
    total, u = 0, m
    for s in sorted(sets, key=lambda s: (len(s), min(s))):
        b = len(s)
        total += 2 * repeats * math.comb(u, b) + check_inputs * math.factorial(b)
        u -= b
    return total
