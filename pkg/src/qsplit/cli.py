"""Command-line entry point: ``qsplit {parse,split,attack,sweep,chart}``.

Exit codes: 0 success, 2 parse error, 3 attack failure, 4 config error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .attack import AttackConfig, brute_force, recover
from .bench import ConfigError, SweepConfig, emit_chart, read_records, run_sweep
from .circuit import interaction_components
from .oracle import DEFAULT_TIME_LIMIT, NoiseModel, Oracle
from .revlib import RealParseError, bundled_path, load_real
from .sim import equivalent_on_basis
from .split import SplitInstance, recombine, split

EXIT_OK, EXIT_PARSE, EXIT_ATTACK, EXIT_CONFIG = 0, 2, 3, 4

log = logging.getLogger("qsplit")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_circuit(source: str):
    path = Path(source)
    if not path.exists() and path.suffix != ".real":
        try:
            path = bundled_path(source)
        except FileNotFoundError:
            raise CliError(EXIT_CONFIG, f"no such file or bundled benchmark: {source}") from None
    try:
        circuit, _ = load_real(path)
    except OSError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    except RealParseError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None
    return circuit


def _budget(value: str) -> int | None:
    return None if value == "none" else int(value)


def _time_limit(value: str) -> float | None:
    return None if value == "none" else float(value)


def cmd_parse(args) -> int:
    c = _load_circuit(args.file)
    print(f"name: {c.name}")
    print(f"m = {c.num_qubits}")
    print(f"L = {c.depth}")
    print(f"gates = {len(c.gates)}")
    for n in range(1, c.depth):
        inst = split(c, n, mapping=tuple(range(c.num_qubits)))
        blocks = sorted(interaction_components(inst.split2), key=lambda b: (b.size, min(b.qubits)))
        desc = " ".join("{" + ",".join(map(str, b.sorted())) + "}" for b in blocks)
        print(f"n = {n}: blocks {desc}")
    return EXIT_OK


def cmd_split(args) -> int:
    c = _load_circuit(args.file)
    try:
        inst = split(c, args.n, args.seed)
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    text = inst.dumps()
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def cmd_attack(args) -> int:
    try:
        inst = SplitInstance.loads(Path(args.instance).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_PARSE, f"{args.instance}: not a split instance ({exc})") from None
    try:
        noise = NoiseModel(args.noise_p, args.noise_q, args.seed)
        config = AttackConfig(epsilon=args.epsilon, repeats=args.repeats, check_inputs=args.check_inputs,
                              seed=args.seed)
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    oracle = Oracle(inst, noise, budget=args.budget, time_limit=args.time_limit)
    run = recover if args.attack == "hier" else brute_force
    result = run(inst.public, oracle, config)
    print(f"outcome: {result.outcome.value}")
    print(f"t = {result.t}")
    if args.trace:
        result.write_trace(args.trace)
    if args.transcript:
        oracle.ledger.write_jsonl(args.transcript)
    if not result.recovered:
        return EXIT_ATTACK
    print("pi_hat = " + " ".join(map(str, result.pi_hat)))
    source = recombine(inst.split1, inst.hidden, inst.split2)
    rebuilt = recombine(inst.split1, result.pi_hat, inst.split2)
    ok = equivalent_on_basis(source, rebuilt)
    print(f"equivalent: {'yes' if ok else 'no'}")
    if args.output:
        doc = {"outcome": result.outcome.value, "t": result.t, "pi_hat": list(result.pi_hat), "equivalent": ok}
        Path(args.output).write_text(json.dumps(doc) + "\n", encoding="utf-8")
    return EXIT_OK if ok else EXIT_ATTACK


def cmd_sweep(args) -> int:
    try:
        config = SweepConfig.load(args.config)
    except ConfigError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    records = run_sweep(config, args.output)
    print(f"{len(records)} records")
    return EXIT_OK


def cmd_chart(args) -> int:
    try:
        records = read_records(args.csv)
    except OSError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    except (ValueError, KeyError) as exc:
        raise CliError(EXIT_PARSE, f"{args.csv}: {exc}") from None
    if not records:
        raise CliError(EXIT_CONFIG, f"{args.csv}: no records to plot")
    out = args.output or str(Path(args.csv).with_suffix(".svg"))
    series = emit_chart(records, out)
    print(f"wrote {out} ({len(series)} series)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsplit", description="Split-compilation wiring recovery toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="validate a .real file and print m, L and block structure")
    p.add_argument("file", help=".real path or bundled benchmark name")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("split", help="write a split instance as JSON")
    p.add_argument("file", help=".real path or bundled benchmark name")
    p.add_argument("-n", type=int, required=True, help="layers in Split 2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="JSON path (default stdout)")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("attack", help="recover the hidden wiring of a split instance")
    p.add_argument("instance", help="split instance JSON")
    p.add_argument("--attack", choices=("hier", "brute"), default="hier")
    p.add_argument("--epsilon", type=float, default=0.03)
    p.add_argument("--noise-p", type=float, default=0.0)
    p.add_argument("--noise-q", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--check-inputs", type=int, default=1)
    p.add_argument("--budget", type=_budget, default=-1, help="query budget, -1 = 10*m!, 'none' = unlimited")
    p.add_argument("--time-limit", type=_time_limit, default=DEFAULT_TIME_LIMIT, help="seconds or 'none'")
    p.add_argument("--trace", help="write the attack trace as JSON lines")
    p.add_argument("--transcript", help="write the oracle query transcript as JSON lines")
    p.add_argument("--output", help="write the result as JSON")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("sweep", help="run a depth sweep from a JSON config")
    p.add_argument("config")
    p.add_argument("--output", help="CSV path (default <output_dir>/records.csv)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("chart", help="plot median t against n from a sweep CSV")
    p.add_argument("csv")
    p.add_argument("--output", help="SVG path (default: CSV path with .svg)")
    p.set_defaults(func=cmd_chart)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"qsplit {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
