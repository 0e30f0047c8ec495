"""Black-box access to the correctly wired circuit.

The oracle takes a state on the Split-1 input wires and returns the state on
the physical output wires, which are Split 2's own wire labels. Every call is
counted in a :class:`QueryLedger`; budgets and wall-clock limits turn into
:class:`BudgetExhausted` / :class:`TimeLimitExceeded`.
"""
from __future__ import annotations

import hashlib
import json
import math
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .sim import PureState, SampleCounts, _run, index_to_bits
from .split import SplitInstance

DEFAULT_TIME_LIMIT = 300.0


class OracleError(RuntimeError):
    def __init__(self, message: str, t: int):
        super().__init__(f"{message} (t={t})")
        self.t = t


class BudgetExhausted(OracleError):
    pass


class TimeLimitExceeded(OracleError):
    pass


@dataclass(frozen=True)
class NoiseModel:
    """Per-query output perturbation ``p`` and per-qubit readout flip ``q``.

    With ``p > 0`` every returned state is rotated by a unitary
    ``exp(-i*theta*G)`` towards a Haar-random direction orthogonal to the
    ideal output, with ``sin(theta)**2 = p``: the fidelity to the ideal output
    is exactly ``1 - p``.
    """

    p: float = 0.0
    q: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("p", "q"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"noise parameter {name}={value} outside [0, 1]")

    @property
    def noiseless(self) -> bool:
        return self.p == 0.0 and self.q == 0.0


@dataclass
class QueryLedger:
    budget: int | None = None
    time_limit: float | None = None
    t: int = 0
    transcript: list[tuple[int, str, str, int]] = field(default_factory=list)
    started: float = field(default_factory=time.monotonic)

    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def restart_clock(self) -> None:
        self.started = time.monotonic()

    def write_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for index, digest_in, digest_out, t in self.transcript:
                fh.write(json.dumps({"index": index, "input": digest_in, "output": digest_out, "t": t}) + "\n")


def default_budget(m: int) -> int:
    return 10 * math.factorial(m)


class Oracle:
    """Noisy, counted black box built from a :class:`SplitInstance`.

    Only :meth:`query_state`, :meth:`query_counts` and :attr:`ledger` are meant
    for attack code; the wiring stays in private attributes.
    """

    def __init__(
        self,
        instance: SplitInstance,
        noise: NoiseModel | None = None,
        budget: int | None = -1,
        time_limit: float | None = DEFAULT_TIME_LIMIT,
    ):
        self.num_qubits = instance.num_qubits
        self.__instance = instance
        self.__noise = noise or NoiseModel()
        self.__rng = np.random.default_rng(self.__noise.seed)
        if budget == -1:
            budget = default_budget(self.num_qubits)
        self.ledger = QueryLedger(budget=budget, time_limit=time_limit)
        self.__lock = threading.Lock()

    @property
    def noise(self) -> NoiseModel:
        return self.__noise

    def _ideal(self, state: PureState) -> PureState:
        inst = self.__instance
        m = self.num_qubits
        psi = _run(inst.split1, np.array(state.tensor, copy=True))
        axes = [0] * m
        for j, dest in enumerate(inst.hidden.pi):
            axes[dest] = j
        psi = np.ascontiguousarray(np.transpose(psi, axes))
        return PureState(m, _run(inst.split2, psi).reshape(-1))

    def _perturb(self, out: PureState) -> PureState:
        p = self.__noise.p
        if p == 0.0:
            return out
        psi = out.amplitudes
        dim = psi.size
        if dim == 1:
            return out
        g = self.__rng.normal(size=dim) + 1j * self.__rng.normal(size=dim)
        g -= np.vdot(psi, g) * psi
        g /= np.linalg.norm(g)
        return PureState(out.num_qubits, math.sqrt(1 - p) * psi + math.sqrt(p) * g)

    def _check(self, state: PureState) -> None:
        if state.num_qubits != self.num_qubits:
            raise ValueError(f"oracle takes {self.num_qubits}-qubit inputs, got {state.num_qubits}")
        led = self.ledger
        if led.budget is not None and led.t >= led.budget:
            raise BudgetExhausted("query budget exhausted", led.t)
        if led.time_limit is not None and led.elapsed() > led.time_limit:
            raise TimeLimitExceeded("time limit exceeded", led.t)

    def _record(self, state: PureState, out_digest: str) -> None:
        led = self.ledger
        led.t += 1
        led.transcript.append((led.t - 1, state.digest(), out_digest, led.t))

    def query_state(self, state: PureState) -> PureState:
        with self.__lock:
            self._check(state)
            out = self._perturb(self._ideal(state))
            self._record(state, out.digest())
            return out

    def query_counts(self, state: PureState, shots: int) -> SampleCounts:
        if shots < 1:
            raise ValueError("shots must be at least 1")
        with self.__lock:
            self._check(state)
            out = self._perturb(self._ideal(state))
            m = self.num_qubits
            rng = self.__rng
            probs = out.probabilities()
            drawn = rng.choice(probs.size, size=shots, p=probs / probs.sum())
            bits = (drawn[:, None] >> (m - 1 - np.arange(m))) & 1
            if self.__noise.q > 0:
                bits ^= (rng.random(bits.shape) < self.__noise.q).astype(bits.dtype)
            values, counts = np.unique((bits << (m - 1 - np.arange(m))).sum(axis=1), return_counts=True)
            result = SampleCounts(shots, {index_to_bits(int(v), m): int(c) for v, c in zip(values, counts)})
            digest = hashlib.sha256(json.dumps(result.counts, sort_keys=True).encode()).hexdigest()[:16]
            self._record(state, digest)
            return result
