import json

import numpy as np
import pytest

from qsplit.circuit import Circuit, x
from qsplit.oracle import BudgetExhausted, NoiseModel, Oracle, TimeLimitExceeded, default_budget
from qsplit.revlib import load_bundled
from qsplit.sim import PureState, apply, fidelity_pure
from qsplit.split import HiddenMapping, SplitInstance, recombine, split


def alu_instance(n=2, seed=3):
    c, _ = load_bundled("alu")
    return c, split(c, n, seed)


def test_noiseless_output_is_source_output_on_split2_wires(rng):
    c, inst = alu_instance()
    oracle = Oracle(inst)
    for _ in range(5):
        v = rng.normal(size=16) + 1j * rng.normal(size=16)
        s = PureState(4, v / np.linalg.norm(v))
        expected = apply(c, s).permuted(inst.hidden.pi)
        assert np.allclose(oracle.query_state(s).amplitudes, expected.amplitudes, atol=1e-8)


def test_identity_mapping_output_equals_source():
    c, _ = load_bundled("alu")
    inst = split(c, 2, mapping=HiddenMapping.identity(4))
    s = PureState.basis("1100")
    assert np.allclose(Oracle(inst).query_state(s).amplitudes, apply(c, s).amplitudes)


def test_two_calls_count_two():
    _, inst = alu_instance()
    oracle = Oracle(inst)
    assert oracle.ledger.t == 0
    oracle.query_state(PureState.zero(4))
    oracle.query_state(PureState.zero(4))
    assert oracle.ledger.t == 2 == len(oracle.ledger.transcript)


def test_width_mismatch():
    _, inst = alu_instance()
    with pytest.raises(ValueError):
        Oracle(inst).query_state(PureState.zero(3))


def test_budget_and_time_limit():
    _, inst = alu_instance()
    assert Oracle(inst).ledger.budget == default_budget(4) == 240
    oracle = Oracle(inst, budget=3)
    for _ in range(3):
        oracle.query_state(PureState.zero(4))
    with pytest.raises(BudgetExhausted) as info:
        oracle.query_state(PureState.zero(4))
    assert info.value.t == 3 and oracle.ledger.t == 3
    slow = Oracle(inst, time_limit=0.0)
    with pytest.raises(TimeLimitExceeded):
        slow.query_state(PureState.zero(4))
    assert Oracle(inst, budget=None).ledger.budget is None


def test_noise_fidelity_calibration():
    c, inst = alu_instance()
    oracle = Oracle(inst, NoiseModel(p=0.01, seed=5), budget=None)
    rng = np.random.default_rng(0)
    fids = []
    for _ in range(500):
        s = PureState.basis(rng.integers(0, 2, 4).tolist())
        ideal = apply(c, s).permuted(inst.hidden.pi)
        fids.append(fidelity_pure(oracle.query_state(s), ideal))
    assert np.mean(fids) >= 0.99 - 0.005
    assert np.allclose(fids, 0.99, atol=1e-9)


def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel(p=1.5)
    with pytest.raises(ValueError):
        NoiseModel(q=-0.1)
    assert NoiseModel().noiseless


def test_determinism_of_noisy_transcripts():
    _, inst = alu_instance()
    runs = []
    for _ in range(2):
        oracle = Oracle(inst, NoiseModel(p=0.05, seed=9))
        outs = [oracle.query_state(PureState.basis(format(i, "04b"))).amplitudes for i in range(6)]
        runs.append((outs, list(oracle.ledger.transcript)))
    assert all(np.array_equal(a, b) for a, b in zip(runs[0][0], runs[1][0]))
    assert runs[0][1] == runs[1][1]


def test_query_counts_deterministic_output():
    inst = SplitInstance(Circuit(3, (x(0),)), Circuit(3, (x(2),)), HiddenMapping.identity(3), 1)
    counts = Oracle(inst).query_counts(PureState.basis("000"), 200)
    assert counts.counts == {"101": 200}


def test_query_counts_readout_flips_and_ledger():
    inst = SplitInstance(Circuit(1), Circuit(1), HiddenMapping.identity(1), 1)
    oracle = Oracle(inst, NoiseModel(q=0.5, seed=2))
    counts = oracle.query_counts(PureState.basis("0"), 100_000)
    assert abs(counts.frequency("1") - 0.5) <= 0.01
    assert oracle.ledger.t == 1
    with pytest.raises(ValueError):
        oracle.query_counts(PureState.basis("0"), 0)


def test_attacker_surface_hides_the_wiring():
    _, inst = alu_instance()
    oracle = Oracle(inst)
    public = {name for name in dir(oracle) if not name.startswith("_")}
    assert public == {"ledger", "noise", "num_qubits", "query_counts", "query_state"}
    # the instance is held only in name-mangled private attributes
    for name, value in vars(oracle).items():
        if value is inst or isinstance(value, HiddenMapping):
            assert name.startswith("_Oracle__")
    assert "pi" not in json.dumps(vars(oracle.ledger), default=str)


def test_transcript_jsonl(tmp_path):
    _, inst = alu_instance()
    oracle = Oracle(inst)
    for i in range(3):
        oracle.query_state(PureState.basis(format(i, "04b")))
    path = tmp_path / "q.jsonl"
    oracle.ledger.write_jsonl(path)
    lines = [json.loads(line) for line in path.read_text().splitlines()]
    assert [d["index"] for d in lines] == [0, 1, 2]
    assert [d["t"] for d in lines] == [1, 2, 3]
    assert all(len(d["input"]) == 16 and len(d["output"]) == 16 for d in lines)


def test_recombined_source_agrees_with_oracle():
    c, inst = alu_instance(n=3, seed=8)
    rec = recombine(inst.split1, inst.hidden, inst.split2)
    s = PureState.basis("1011")
    out = Oracle(inst).query_state(s)
    assert fidelity_pure(out, apply(rec, s).permuted(inst.hidden.pi)) == pytest.approx(1)
