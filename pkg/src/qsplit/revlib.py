"""Reader and writer for the RevLib ``.real`` reversible-circuit format.

Supported gate lines (between ``.begin`` and ``.end``)::

    t3 a b c     multi-controlled X, controls a b, target c (t1 = NOT, t2 = CNOT)
    f3 a b c     controlled SWAP of b and c, control a
    p3 a b c     Peres gate, stored as Toffoli(a, b -> c) + CNOT(a -> b)
    v a b        controlled V (square root of NOT), control a, target b
    v+ a b       controlled V-dagger

The arity digits are optional. Only positive controls are accepted.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .circuit import Circuit, Gate, GateKind, peres

log = logging.getLogger(__name__)

_GATE_RE = re.compile(r"^(t|f|p|v\+|v)(\d*)$", re.IGNORECASE)
_KNOWN = {".version", ".numvars", ".variables", ".inputs", ".outputs", ".constants", ".garbage", ".begin", ".end"}


class RealParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RealSerializeError(ValueError):
    pass


@dataclass
class RealHeader:
    numvars: int
    variables: list[str]
    version: str = "1.0"
    inputs: list[str] | None = None
    outputs: list[str] | None = None
    constants: str | None = None
    garbage: str | None = None

    def __post_init__(self) -> None:
        if self.numvars != len(self.variables):
            raise ValueError(f".numvars {self.numvars} but {len(self.variables)} variables")
        for flag in ("constants", "garbage"):
            value = getattr(self, flag)
            if value is not None and len(value) != self.numvars:
                raise ValueError(f".{flag} must have {self.numvars} characters")

    @classmethod
    def default(cls, num_qubits: int) -> RealHeader:
        names = [f"x{i}" for i in range(num_qubits)]
        return cls(num_qubits, names)


def parse_real(text: str, name: str = "") -> tuple[Circuit, RealHeader]:
    directives: dict[str, tuple[int, list[str]]] = {}
    gate_lines: list[tuple[int, list[str]]] = []
    in_body = ended = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("."):
            key, *rest = line.split()
            key = key.lower()
            if key == ".begin":
                in_body = True
            elif key == ".end":
                in_body, ended = False, True
            elif key in _KNOWN:
                directives[key] = (lineno, rest)
            else:
                log.warning("line %d: skipping unsupported directive %s", lineno, key)
            continue
        if not in_body:
            raise RealParseError(lineno, f"gate line outside .begin/.end: {line!r}")
        gate_lines.append((lineno, line.split()))

    if ".numvars" not in directives:
        raise RealParseError(1, "missing .numvars directive")
    lineno, rest = directives[".numvars"]
    try:
        numvars = int(rest[0])
    except (IndexError, ValueError):
        raise RealParseError(lineno, ".numvars needs an integer") from None
    if ".variables" in directives:
        vline, variables = directives[".variables"]
    else:
        vline, variables = lineno, [f"x{i}" for i in range(numvars)]
    if len(variables) != numvars:
        raise RealParseError(vline, f".numvars {numvars} but {len(variables)} variables declared")
    if len(set(variables)) != len(variables):
        raise RealParseError(vline, "duplicate variable name")
    if gate_lines and not ended:
        raise RealParseError(gate_lines[-1][0], "missing .end")

    def flag(key: str) -> str | None:
        if key not in directives:
            return None
        ln, rest = directives[key]
        value = "".join(rest)
        if len(value) != numvars:
            raise RealParseError(ln, f"{key} must have {numvars} characters")
        return value

    def names(key: str) -> list[str] | None:
        return list(directives[key][1]) if key in directives else None

    header = RealHeader(
        numvars=numvars,
        variables=list(variables),
        version=" ".join(directives.get(".version", (0, ["1.0"]))[1]) or "1.0",
        inputs=names(".inputs"),
        outputs=names(".outputs"),
        constants=flag(".constants"),
        garbage=flag(".garbage"),
    )
    index = {v: i for i, v in enumerate(variables)}
    gates: list[Gate] = []
    for lineno, tokens in gate_lines:
        gates.extend(_parse_gate(lineno, tokens, index))
    return Circuit(numvars, tuple(gates), name), header


def _parse_gate(lineno: int, tokens: list[str], index: dict[str, int]) -> list[Gate]:
    head, operands = tokens[0], tokens[1:]
    match = _GATE_RE.match(head)
    if not match:
        raise RealParseError(lineno, f"unknown gate family {head!r}")
    family, digits = match.group(1).lower(), match.group(2)
    if digits and int(digits) != len(operands):
        raise RealParseError(
            lineno, f"arity token {head!r} disagrees with {len(operands)} operand(s)"
        )
    for op in operands:
        if op.startswith("-"):
            raise RealParseError(lineno, f"negative control {op!r} is not supported")
        if op not in index:
            raise RealParseError(lineno, f"undeclared variable {op!r}")
    if len(set(operands)) != len(operands):
        raise RealParseError(lineno, f"duplicate operand in {' '.join(tokens)!r}")
    wires = [index[op] for op in operands]
    need = {"t": 1, "f": 2, "p": 3, "v": 2, "v+": 2}[family]
    if len(wires) < need or (family in ("p", "v", "v+") and len(wires) != need):
        raise RealParseError(lineno, f"{family} gate with {len(wires)} operand(s)")
    if family == "t":
        return [Gate(GateKind.X, tuple(wires[:-1]), (wires[-1],))]
    if family == "f":
        return [Gate(GateKind.SWAP, tuple(wires[:-2]), tuple(wires[-2:]))]
    if family == "p":
        return peres(*wires)
    kind = GateKind.V if family == "v" else GateKind.VDG
    return [Gate(kind, (wires[0],), (wires[1],))]


def serialize_real(circuit: Circuit, header: RealHeader | None = None) -> str:
    header = header or RealHeader.default(circuit.num_qubits)
    if header.numvars != circuit.num_qubits:
        raise RealSerializeError(
            f"header declares {header.numvars} variables for a {circuit.num_qubits}-qubit circuit"
        )
    var = header.variables
    lines = [f".version {header.version}", f".numvars {header.numvars}", ".variables " + " ".join(var)]
    if header.inputs is not None:
        lines.append(".inputs " + " ".join(header.inputs))
    if header.outputs is not None:
        lines.append(".outputs " + " ".join(header.outputs))
    if header.constants is not None:
        lines.append(f".constants {header.constants}")
    if header.garbage is not None:
        lines.append(f".garbage {header.garbage}")
    lines.append(".begin")
    for g in circuit.gates:
        ops = " ".join(var[q] for q in g.qubits)
        n = len(g.qubits)
        if g.kind is GateKind.X:
            lines.append(f"t{n} {ops}")
        elif g.kind is GateKind.SWAP:
            lines.append(f"f{n} {ops}")
        elif g.kind in (GateKind.V, GateKind.VDG) and len(g.controls) == 1:
            lines.append(f"{'v' if g.kind is GateKind.V else 'v+'}{n} {ops}")
        else:
            raise RealSerializeError(f"gate {g} has no .real encoding")
    lines.append(".end")
    return "\n".join(lines) + "\n"


def load_real(path: str | Path) -> tuple[Circuit, RealHeader]:
    path = Path(path)
    return parse_real(path.read_text(encoding="utf-8"), name=path.stem)


def bundled_benchmarks() -> list[str]:
    """Names of the benchmark circuits shipped with the package."""
    root = resources.files("qsplit") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".real"))


def bundled_path(name: str) -> Path:
    path = Path(str(resources.files("qsplit") / "data" / f"{name}.real"))
    if not path.exists():
        raise FileNotFoundError(f"no bundled benchmark named {name!r}")
    return path


def load_bundled(name: str) -> tuple[Circuit, RealHeader]:
    return load_real(bundled_path(name))
