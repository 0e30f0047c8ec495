"""Each bundled benchmark is checked against the function it is named after."""
import itertools

import pytest

from qsplit.revlib import load_bundled
from qsplit.sim import PureState, apply, permutation_table

SIZES = {"rd84": 15, "rd73": 9, "rd53": 10, "sym6": 10, "mini-alu": 10, "alu": 4, "ncv4": 4}


def run(name, inputs):
    """Output bits of the fixture for a full input assignment."""
    c, _ = load_bundled(name)
    if c.is_classical:
        table = permutation_table(c)
        idx = int("".join(map(str, inputs)), 2)
        return [int(b) for b in format(int(table[idx]), f"0{c.num_qubits}b")]
    return [int(b) for b in apply(c, PureState.basis(inputs)).label()]


@pytest.mark.parametrize("name, m", SIZES.items())
def test_sizes_and_depths(name, m):
    c, header = load_bundled(name)
    assert c.num_qubits == m == header.numvars
    assert 4 <= c.depth <= 29


def test_rd84_weight():
    for xs in itertools.product((0, 1), repeat=8):
        out = run("rd84", list(xs) + [0] * 7)
        assert out[7] + 2 * out[11] + 4 * out[13] + 8 * out[14] == sum(xs)


def test_rd73_weight():
    for xs in itertools.product((0, 1), repeat=7):
        out = run("rd73", list(xs) + [0, 0])
        assert out[0] + 2 * out[7] + 4 * out[8] == sum(xs)


def test_rd53_weight():
    for xs in itertools.product((0, 1), repeat=5):
        out = run("rd53", list(xs) + [0] * 5)
        assert out[7] + 2 * out[8] + 4 * out[9] == sum(xs)


def test_sym6_threshold_band():
    for xs in itertools.product((0, 1), repeat=6):
        out = run("sym6", list(xs) + [0] * 4)
        assert out[9] == int(2 <= sum(xs) <= 4)


def test_mini_alu_operations():
    for a, b, s0, s1 in itertools.product((0, 1), repeat=4):
        out = run("mini-alu", [a, b, s0, s1] + [0] * 6)
        op = 2 * s1 + s0
        y0 = [a & b, a | b, a ^ b, a ^ b][op]
        y1 = a & b if op == 3 else 0
        assert out[:4] == [a, b, s0, s1]
        assert (out[8], out[9]) == (y0, y1)


def test_alu_select():
    for s, a, b in itertools.product((0, 1), repeat=3):
        out = run("alu", [s, a, b, 0])
        assert out == [s, a, b, (a ^ b) if s else (a & b)]


def test_ncv4_truth_table():
    for a, b, c, d in itertools.product((0, 1), repeat=4):
        assert run("ncv4", [a, b, c, d]) == [a, b, c ^ (a & b), d ^ c]
