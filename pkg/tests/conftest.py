import sys
from pathlib import Path

import numpy as np
import pytest

from qsplit.circuit import Circuit, Gate, GateKind, mcx, random_mct_circuit

sys.path.insert(0, str(Path(__file__).parent))

# filled in by test_acceptance.py, printed at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def random_gate_circuit(m: int, num_gates: int, seed: int) -> Circuit:
    """Random circuit over every gate family the simulator supports."""
    rng = np.random.default_rng(seed)
    one = [GateKind.H, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG, GateKind.X]
    rot = [GateKind.RX, GateKind.RY, GateKind.RZ]
    gates = []
    for _ in range(num_gates):
        r = rng.random()
        if r < 0.3:
            gates.append(Gate(one[rng.integers(len(one))], (), (int(rng.integers(m)),)))
        elif r < 0.45:
            gates.append(Gate(rot[rng.integers(3)], (), (int(rng.integers(m)),), float(rng.uniform(-np.pi, np.pi))))
        elif r < 0.6 and m >= 2:
            c, t = rng.choice(m, 2, replace=False)
            kind = GateKind.V if rng.random() < 0.5 else GateKind.VDG
            gates.append(Gate(kind, (int(c),), (int(t),)))
        elif r < 0.7 and m >= 3:
            c, a, b = rng.choice(m, 3, replace=False)
            gates.append(Gate(GateKind.SWAP, (int(c),), (int(a), int(b))))
        else:
            nc = int(rng.integers(0, min(3, m - 1) + 1))
            w = rng.choice(m, nc + 1, replace=False)
            gates.append(mcx([int(q) for q in w[:-1]], int(w[-1])))
    return Circuit(m, tuple(gates), f"rand{m}_{seed}")


def random_state(m: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2**m) + 1j * rng.normal(size=2**m)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


__all__ = ["random_gate_circuit", "random_mct_circuit", "random_state", "ACCEPTANCE"]
