"""Write the bundled benchmark circuits to src/qsplit/data/.

The RevLib distribution is not shipped here, so each benchmark is a fresh
reversible realization of the named function at the line count used in the
experiments. tests/test_fixtures.py checks every file against a truth table.

    python scripts/build_fixtures.py
"""
from __future__ import annotations

from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "qsplit" / "data"


def real(name, comment, variables, inputs, outputs, constants, garbage, body):
    lines = [f"# {line}" if line else "#" for line in comment.strip().splitlines()]
    lines += [
        ".version 1.0",
        f".numvars {len(variables)}",
        ".variables " + " ".join(variables),
        ".inputs " + " ".join(inputs),
        ".outputs " + " ".join(outputs),
        f".constants {constants}",
        f".garbage {garbage}",
        ".begin",
        *body,
        ".end",
    ]
    (DATA / f"{name}.real").write_text("\n".join(lines) + "\n", encoding="utf-8")


def full_adder(a, b, c, carry):
    # two Peres gates: c <- a^b^c (sum), carry <- maj(a, b, c), b <- a^b
    return [f"p3 {a} {b} {carry}", f"p3 {b} {c} {carry}"]


def increment(x, c0, c1, c2=None):
    """Add bit x into the counter (c2 c1 c0)."""
    body = []
    if c2 is not None:
        body.append(f"t4 {x} {c0} {c1} {c2}")
    body += [f"t3 {x} {c0} {c1}", f"t2 {x} {c0}"]
    return body


def rd84():
    xs = [f"x{i}" for i in range(1, 9)]
    anc = [f"a{i}" for i in range(1, 8)]
    body = []
    body += full_adder("x1", "x2", "x3", "a1")  # x3 = s1, a1 = c1
    body += full_adder("x4", "x5", "x6", "a2")  # x6 = s2, a2 = c2
    body += full_adder("x3", "x6", "x7", "a3")  # x7 = s3, a3 = c3
    body += ["p3 x7 x8 a4"]                      # x8 = w0, a4 = c4
    body += full_adder("a1", "a2", "a3", "a5")  # a3 = s5, a5 = c5
    body += ["p3 a3 a4 a6"]                      # a4 = w1, a6 = c6
    body += ["p3 a5 a6 a7"]                      # a6 = w2, a7 = w3
    outputs = ["-"] * 15
    names = xs + anc
    for wire, label in (("x8", "w0"), ("a4", "w1"), ("a6", "w2"), ("a7", "w3")):
        outputs[names.index(wire)] = label
    real(
        "rd84",
        """
rd84: 4-bit binary weight of 8 inputs (x1..x8), 15 lines.
Peres-gate full-adder tree; outputs w0..w3 on x8, a4, a6, a7.
""",
        names,
        xs + ["0"] * 7,
        [o if o != "-" else f"g{i}" for i, o in enumerate(outputs)],
        "-" * 8 + "0" * 7,
        "".join("-" if o != "-" else "1" for o in outputs),
        body,
    )


def rd73():
    xs = [f"x{i}" for i in range(1, 8)]
    names = xs + ["c1", "c2"]
    # counter (c2 c1 x1) starts at x1; add x2..x7
    body = ["t3 x2 x1 c1", "t2 x2 x1"]
    for i in range(3, 8):
        body += increment(f"x{i}", "x1", "c1", "c2")
    real(
        "rd73",
        """
rd73: 3-bit binary weight of 7 inputs (x1..x7), 9 lines.
In-place ripple counter seeded with x1; outputs w0 = x1, w1 = c1, w2 = c2.
""",
        names,
        xs + ["0", "0"],
        ["w0"] + [f"g{i}" for i in range(2, 8)] + ["w1", "w2"],
        "-" * 7 + "00",
        "0" + "1" * 6 + "00",
        body,
    )


def rd53():
    names = [f"x{i}" for i in range(1, 6)] + ["a1", "a2", "o0", "o1", "o2"]
    body = []
    body += full_adder("x1", "x2", "x3", "a1")  # x3 = s1, a1 = c1
    body += full_adder("x3", "x4", "x5", "a2")  # x5 = w0, a2 = c2
    body += ["t2 x5 o0", "t3 a1 a2 o2", "t2 a1 o1", "t2 a2 o1"]
    real(
        "rd53",
        """
rd53: 3-bit binary weight of 5 inputs (x1..x5), 10 lines.
Two Peres full adders; w0, w1, w2 copied onto clean output lines o0..o2.
""",
        names,
        [f"x{i}" for i in range(1, 6)] + ["0"] * 5,
        ["g1", "g2", "g3", "g4", "g5", "g6", "g7", "w0", "w1", "w2"],
        "-" * 5 + "0" * 5,
        "1" * 7 + "000",
        body,
    )


def sym6():
    names = [f"x{i}" for i in range(1, 7)] + ["c0", "c1", "c2", "f"]
    body = ["t2 x1 c0", "t3 x2 c0 c1", "t2 x2 c0"]
    for i in range(3, 7):
        body += increment(f"x{i}", "c0", "c1", "c2")
    # f = [weight in {2, 3, 4}] = c1 ^ c2 ^ c0 c2 ^ c0 c1 c2
    body += ["t2 c1 f", "t2 c2 f", "t3 c0 c2 f", "t4 c0 c1 c2 f"]
    real(
        "sym6",
        """
sym6: symmetric function of 6 inputs, true when 2 <= weight <= 4; 10 lines.
Ripple counter (c2 c1 c0) followed by an ESOP readout onto line f.
""",
        names,
        [f"x{i}" for i in range(1, 7)] + ["0"] * 4,
        [f"g{i}" for i in range(1, 10)] + ["f"],
        "-" * 6 + "0" * 4,
        "1" * 9 + "0",
        body,
    )


def mini_alu():
    names = ["a", "b", "s0", "s1", "and", "xor", "or", "dec", "y0", "y1"]
    body = [
        "t3 a b and",
        "t2 a xor",
        "t2 b xor",
        "t2 and or",
        "t2 xor or",
        "t3 s1 s0 dec",
        "t3 s1 xor y0",
        "t1 s1",
        "t1 s0",
        "t4 s1 s0 and y0",
        "t1 s0",
        "t4 s1 s0 or y0",
        "t1 s1",
        "t3 dec and y1",
    ]
    real(
        "mini-alu",
        """
mini-alu: 1-bit ALU on operands a, b with select (s1 s0), 10 lines.
00: y0 = a AND b   01: y0 = a OR b   10: y0 = a XOR b   11: (y1 y0) = a + b
""",
        names,
        ["a", "b", "s0", "s1"] + ["0"] * 6,
        ["a", "b", "s0", "s1", "g0", "g1", "g2", "g3", "y0", "y1"],
        "----" + "0" * 6,
        "1111" + "1111" + "00",
        body,
    )


def alu():
    names = ["s", "a", "b", "y"]
    body = ["t3 a b y", "t4 s a b y", "t2 a b", "t3 s b y", "t2 a b"]
    real(
        "alu",
        """
alu: 4-line function unit, y = (s ? a XOR b : a AND b); inputs pass through.
""",
        names,
        ["s", "a", "b", "0"],
        ["s", "a", "b", "y"],
        "---0",
        "1110",
        body,
    )


def ncv4():
    # controlled-V realization of a Toffoli into a third line, then a CNOT fan-out
    names = ["a", "b", "c", "d"]
    body = ["v b c", "t2 a b", "v+ b c", "t2 a b", "v a c", "t2 c d", "t3 a b d"]
    real(
        "ncv4",
        """
ncv4: 4-line NCV circuit. Lines 1..3 realize c ^= a AND b with V / V+ gates,
then d ^= c and d ^= a AND b, so d = d0 ^ c0.
""",
        names,
        ["a", "b", "c", "d"],
        ["a", "b", "c", "d"],
        "----",
        "----",
        body,
    )


if __name__ == "__main__":
    DATA.mkdir(parents=True, exist_ok=True)
    for build in (rd84, rd73, rd53, sym6, mini_alu, alu, ncv4):
        build()
    print("wrote", sorted(p.name for p in DATA.glob("*.real")))
