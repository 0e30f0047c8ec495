import itertools
import json
import math

import numpy as np
import pytest

from qsplit.attack import (
    AttackConfig,
    Outcome,
    block_candidate_fidelity,
    brute_force,
    prune_permutations,
    query_upper_bound,
    recover,
    sensitization_pair,
    test_block_candidate as block_test,
)
from qsplit.circuit import Circuit, QubitBlock, ccx, cx, h, interaction_components, swap, x
from qsplit.oracle import NoiseModel, Oracle
from qsplit.revlib import load_bundled
from qsplit.sim import apply, equivalent_on_basis
from qsplit.split import HiddenMapping, SplitInstance, recombine, split


def true_candidate(inst, block):
    return frozenset(j for j in range(inst.num_qubits) if inst.hidden[j] in block.qubits)


# sensitization pairs


def test_pair_with_empty_split1():
    pair = sensitization_pair(Circuit(3), {2})
    assert [s.label() for s in pair.targets] == ["000", "001"]
    assert [s.label() for s in pair.inputs] == ["000", "001"]


def test_pair_differs_exactly_on_candidate():
    for seed in (None, 1, 2, 3):
        pair = sensitization_pair(Circuit(3), {0, 1}, seed=seed)
        a, b = (s.label() for s in pair.targets)
        assert [i for i in range(3) if a[i] != b[i]] == [0, 1]


def test_pair_inputs_invert_split1():
    split1 = Circuit(1, (h(0),))
    pair = sensitization_pair(split1, {0})
    for inp, target in zip(pair.inputs, pair.targets):
        assert np.allclose(apply(split1, inp).amplitudes, target.amplitudes, atol=1e-8)


def test_pair_errors():
    with pytest.raises(ValueError):
        sensitization_pair(Circuit(3), set())
    with pytest.raises(ValueError):
        sensitization_pair(Circuit(3), {0, 1}, assigned={1})


# block candidate test


def classical_cells(name):
    c, _ = load_bundled(name)
    for n in range(1, c.depth):
        for seed in range(3):
            inst = split(c, n, seed)
            if inst.split2.is_classical:
                yield inst


@pytest.mark.parametrize("name", ["alu", "ncv4"])
def test_block_test_complete_on_four_qubit_fixtures(name):
    checked = 0
    for inst in classical_cells(name):
        for block in interaction_components(inst.split2):
            right = true_candidate(inst, block)
            for cand in itertools.combinations(range(4), block.size):
                oracle = Oracle(inst)
                pair = sensitization_pair(inst.split1, cand)
                f = block_candidate_fidelity(oracle, block, pair)
                assert oracle.ledger.t == 2
                if frozenset(cand) == right:
                    assert f == pytest.approx(1, abs=1e-8)
                    assert block_test(Oracle(inst), inst.split2, block, pair)
                else:
                    assert f == pytest.approx(0, abs=1e-8)
                    assert not block_test(Oracle(inst), inst.split2, block, pair)
                checked += 1
    assert checked > 20


def test_block_test_under_calibrated_noise():
    c, _ = load_bundled("alu")
    inst = split(c, 2, 4)
    block = max(interaction_components(inst.split2), key=lambda b: b.size)
    pair = sensitization_pair(inst.split1, true_candidate(inst, block))
    passed = sum(
        block_test(Oracle(inst, NoiseModel(p=0.01, seed=s)), inst.split2, block, pair, 0.03) for s in range(100)
    )
    assert passed >= 95


def test_block_test_size_mismatch():
    c, _ = load_bundled("alu")
    inst = split(c, 1, 0)
    block = QubitBlock(0, frozenset({0, 1}))
    with pytest.raises(ValueError):
        block_test(Oracle(inst), inst.split2, block, sensitization_pair(inst.split1, {0}))


# permutation pruning


def test_singleton_block_needs_at_most_one_query():
    inst = SplitInstance(Circuit(3, (cx(0, 1),)), Circuit(3, (x(1),)), HiddenMapping((2, 1, 0)), 1)
    oracle = Oracle(inst)
    perm = prune_permutations(oracle, inst.split1, inst.split2, QubitBlock(0, frozenset({1})), {1})
    assert perm == {1: 1} and oracle.ledger.t <= 1


@pytest.mark.parametrize("pi", [(0, 1, 2), (1, 0, 2), (2, 0, 1)])
def test_cx_block_orientation(pi):
    split2 = Circuit(3, (cx(0, 1),)).relabel(pi)
    inst = SplitInstance(Circuit(3, (x(2),)), split2, HiddenMapping(pi), 1)
    block = QubitBlock(0, frozenset({pi[0], pi[1]}))
    oracle = Oracle(inst)
    perm = prune_permutations(oracle, inst.split1, inst.split2, block, {0, 1})
    assert perm == {0: pi[0], 1: pi[1]}
    # two orientations, each tried with at most one query plus one distinguishing query
    assert oracle.ledger.t <= 3


def test_symmetric_block_recovers_equivalent_circuit():
    source = Circuit(4, (ccx(0, 1, 2), cx(2, 3), swap(0, 1)))
    for seed in range(5):
        inst = split(source, 1, seed)
        result = recover(inst.public, Oracle(inst))
        assert result.recovered
        assert equivalent_on_basis(source, recombine(inst.split1, result.pi_hat, inst.split2))


def test_literal_mode_is_sound():
    c, _ = load_bundled("alu")
    for n in range(1, c.depth):
        inst = split(c, n, n)
        result = recover(inst.public, Oracle(inst), AttackConfig(reuse_observations=False))
        assert result.recovered and result.pi_hat == inst.hidden.pi


def test_product_inputs_are_sound():
    c, _ = load_bundled("ncv4")
    for n in range(1, c.depth):
        inst = split(c, n, n)
        result = recover(inst.public, Oracle(inst), AttackConfig(input_distribution="random_product"))
        assert result.recovered
        assert equivalent_on_basis(c, recombine(inst.split1, result.pi_hat, inst.split2))


# full recovery


def test_single_layer_of_one_qubit_gates():
    m = 6
    source = Circuit(m, (cx(0, 1), cx(2, 3), cx(4, 5)) + tuple(x(q) for q in range(m)))
    bound = 2 * sum(range(1, m + 1)) + m
    for seed in range(5):
        inst = split(source, 1, seed)
        assert all(b.size == 1 for b in interaction_components(inst.split2))
        result = recover(inst.public, Oracle(inst))
        assert result.recovered and result.t <= bound
        assert result.pi_hat == inst.hidden.pi


def test_ccx_block_identity_mapping():
    source = Circuit(3, (h(0), h(1), ccx(0, 1, 2)))
    inst = split(source, 1, mapping=HiddenMapping.identity(3))
    result = recover(inst.public, Oracle(inst))
    assert result.recovered
    assert result.pi_hat in {(0, 1, 2), (1, 0, 2)}


@pytest.mark.parametrize("name", ["alu", "ncv4", "rd53"])
def test_recovery_is_exact_and_bounded(name):
    c, _ = load_bundled(name)
    for n in range(1, c.depth):
        for seed in range(3):
            inst = split(c, n, seed)
            result = recover(inst.public, Oracle(inst), AttackConfig(seed=seed))
            assert result.recovered
            assert result.pi_hat == inst.hidden.pi
            assert result.t <= query_upper_bound(interaction_components(inst.split2), c.num_qubits)
            assert result.t < math.factorial(c.num_qubits) * 2
            assert result.partial_mapping() == dict(enumerate(inst.hidden.pi))


def test_blocks_are_frozen_once_mapped():
    c, _ = load_bundled("rd53")
    inst = split(c, 3, 2)
    result = recover(inst.public, Oracle(inst))
    mapped = [e["block"] for e in result.trace if e["decision"] == "fully_mapped"]
    assert len(mapped) == len(set(mapped)) == len(result.per_block)
    assert not any(e["decision"] in ("permutations_rejected", "exhausted") for e in result.trace)


def test_outcome_codes():
    c, _ = load_bundled("rd53")
    inst = split(c, 2, 0)
    r = recover(inst.public, Oracle(inst, budget=5))
    assert r.outcome is Outcome.BUDGET_EXHAUSTED and r.t == 5 and r.pi_hat is None
    r = recover(inst.public, Oracle(inst, time_limit=0.0))
    assert r.outcome is Outcome.TIMEOUT and r.pi_hat is None
    noisy = Oracle(inst, NoiseModel(p=0.6, seed=1), budget=None)
    r = recover(inst.public, noisy, AttackConfig(backtracking=False))
    assert r.outcome is Outcome.FAILED and r.pi_hat is None


def test_trace_export(tmp_path):
    c, _ = load_bundled("alu")
    inst = split(c, 2, 1)
    result = recover(inst.public, Oracle(inst))
    path = tmp_path / "trace.jsonl"
    result.write_trace(path)
    events = [json.loads(line) for line in path.read_text().splitlines()]
    assert events and all({"block", "candidate", "decision", "t"} <= set(e) for e in events)
    assert [e["t"] for e in events] == sorted(e["t"] for e in events)
    assert events[-1]["t"] == result.t


def test_config_validation():
    for bad in (dict(epsilon=0), dict(epsilon=1), dict(repeats=0), dict(check_inputs=0),
                dict(input_distribution="haar")):
        with pytest.raises(ValueError):
            AttackConfig(**bad)
    d = AttackConfig()
    assert (d.epsilon, d.repeats, d.check_inputs, d.input_distribution, d.backtracking) == (
        0.03, 1, 1, "random_basis", True)


def test_public_view_width_mismatch():
    c, _ = load_bundled("alu")
    inst = split(c, 2, 1)
    other = split(load_bundled("rd53")[0], 2, 1)
    with pytest.raises(ValueError):
        recover(inst.public, Oracle(other))


# query bound


def test_query_upper_bound_examples():
    m = 5
    singles = [QubitBlock(i, frozenset({i})) for i in range(m)]
    assert query_upper_bound(singles, m) == m * m + 2 * m
    assert query_upper_bound([QubitBlock(0, frozenset(range(m)))], m) == 2 + math.factorial(m)
    with pytest.raises(ValueError):
        query_upper_bound([QubitBlock(0, frozenset({0, 1}))], m)
    with pytest.raises(ValueError):
        query_upper_bound(singles + [QubitBlock(9, frozenset({0}))], m)


# brute force


def test_brute_force_two_qubits():
    inst = SplitInstance(Circuit(2, (x(0),)), Circuit(2, (cx(0, 1),)), HiddenMapping.identity(2), 1)
    r = brute_force(inst.public, Oracle(inst), AttackConfig(input_distribution="random_product"))
    assert r.recovered and r.pi_hat == (0, 1)
    assert len(r.trace) <= 2


def test_brute_force_examines_at_most_m_factorial():
    c, _ = load_bundled("alu")
    for seed in range(5):
        inst = split(c, 2, seed)
        r = brute_force(inst.public, Oracle(inst), AttackConfig(input_distribution="random_product"))
        assert len(r.trace) <= 24
        assert r.recovered and r.pi_hat == inst.hidden.pi
        rank = list(itertools.permutations(range(4))).index(inst.hidden.pi)
        assert r.t == rank + 2
