"""Depth sweeps over a benchmark corpus, CSV records and the SVG chart.

A sweep runs every benchmark x n x seed x attack cell, streams one CSV row per
cell as it finishes, and can be re-plotted from the CSV alone.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import jsonschema
import numpy as np

from .attack import AttackConfig, Outcome, brute_force, recover
from .circuit import Circuit
from .oracle import DEFAULT_TIME_LIMIT, NoiseModel, Oracle
from .revlib import RealParseError, bundled_benchmarks, bundled_path, load_real
from .split import split

log = logging.getLogger(__name__)

CSV_COLUMNS = ("benchmark", "m", "L", "n", "seed", "attack", "t", "outcome", "wall_ms", "epsilon", "noise_p")
ATTACKS = ("hierarchical", "brute_force")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentRecord:
    benchmark: str
    m: int
    L: int
    n: int
    seed: int
    attack: str
    t: int
    outcome: str
    wall_ms: int
    epsilon: float
    noise_p: float

    def __post_init__(self) -> None:
        if not 1 <= self.n <= self.L - 1:
            raise ValueError(f"n={self.n} outside [1, {self.L - 1}]")
        if self.t < 0:
            raise ValueError("t must be non-negative")
        if self.attack not in ATTACKS:
            raise ValueError(f"unknown attack {self.attack!r}")
        Outcome(self.outcome)

    def row(self) -> list[str]:
        return [str(getattr(self, c)) for c in CSV_COLUMNS]

    @classmethod
    def from_row(cls, row: dict[str, str]) -> ExperimentRecord:
        return cls(
            benchmark=row["benchmark"],
            m=int(row["m"]),
            L=int(row["L"]),
            n=int(row["n"]),
            seed=int(row["seed"]),
            attack=row["attack"],
            t=int(row["t"]),
            outcome=row["outcome"],
            wall_ms=int(row["wall_ms"]),
            epsilon=float(row["epsilon"]),
            noise_p=float(row["noise_p"]),
        )


def config_schema() -> dict:
    text = (resources.files("qsplit") / "data" / "sweep_config.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class SweepConfig:
    """What to run. ``corpus`` entries are bundled names or ``.real`` paths.

    ``n_range`` is ``None`` for the full range ``1..L-1``, else an inclusive
    ``(lo, hi)`` clipped to it. With ``record_wall_time`` off every ``wall_ms``
    is written as 0 so that repeated runs give byte-identical CSV files.
    """

    corpus: tuple[str, ...] = ()
    n_range: tuple[int, int] | None = None
    seeds: int = 5
    attacks: tuple[str, ...] = ("hierarchical",)
    epsilon: float = 0.03
    noise_p: float = 0.0
    noise_q: float = 0.0
    budget: int | None = -1
    time_limit: float | None = DEFAULT_TIME_LIMIT
    repeats: int = 1
    check_inputs: int = 1
    input_distribution: str = "random_basis"
    backtracking: bool = True
    brute_force_max_qubits: int = 6
    output_dir: str = "results"
    record_wall_time: bool = True

    def __post_init__(self) -> None:
        if self.seeds < 1:
            raise ConfigError("seeds per cell must be at least 1")
        for a in self.attacks:
            if a not in ATTACKS:
                raise ConfigError(f"unknown attack {a!r}")
        if self.n_range is not None and (len(self.n_range) != 2 or self.n_range[0] > self.n_range[1]):
            raise ConfigError(f"bad n_range {self.n_range}")
        try:
            self.attack_config(0)
            NoiseModel(self.noise_p, self.noise_q)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def attack_config(self, seed: int) -> AttackConfig:
        return AttackConfig(
            epsilon=self.epsilon,
            repeats=self.repeats,
            check_inputs=self.check_inputs,
            input_distribution=self.input_distribution,
            backtracking=self.backtracking,
            seed=seed,
        )

    @classmethod
    def from_dict(cls, doc: dict) -> SweepConfig:
        try:
            jsonschema.validate(doc, config_schema())
        except jsonschema.ValidationError as exc:
            raise ConfigError(f"config: {exc.message}") from None
        doc = dict(doc)
        doc["corpus"] = tuple(doc.get("corpus", ()))
        doc["attacks"] = tuple(doc.get("attacks", ("hierarchical",)))
        if doc.get("n_range") is not None:
            doc["n_range"] = tuple(doc["n_range"])
        return cls(**doc)

    @classmethod
    def load(cls, path: str | Path) -> SweepConfig:
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["corpus"] = list(self.corpus)
        doc["attacks"] = list(self.attacks)
        if self.n_range is not None:
            doc["n_range"] = list(self.n_range)
        return doc


def _resolve(entry: str) -> Path:
    path = Path(entry)
    if path.suffix == ".real" or path.exists():
        return path
    return bundled_path(entry)


def run_cell(
    circuit: Circuit,
    n: int,
    seed: int,
    attack: str,
    config: SweepConfig,
    benchmark: str = "",
) -> ExperimentRecord:
    """One (benchmark, n, seed, attack) run with its own oracle and ledger."""
    inst = split(circuit, n, seed)
    noise = NoiseModel(config.noise_p, config.noise_q, seed)
    oracle = Oracle(inst, noise, budget=config.budget, time_limit=config.time_limit)
    run = recover if attack == "hierarchical" else brute_force
    started = time.monotonic()
    result = run(inst.public, oracle, config.attack_config(seed))
    wall = round((time.monotonic() - started) * 1000) if config.record_wall_time else 0
    return ExperimentRecord(
        benchmark=benchmark or circuit.name,
        m=circuit.num_qubits,
        L=circuit.depth,
        n=n,
        seed=seed,
        attack=attack,
        t=result.t,
        outcome=result.outcome.value,
        wall_ms=wall,
        epsilon=config.epsilon,
        noise_p=config.noise_p,
    )


def run_sweep(config: SweepConfig, csv_path: str | Path | None = None) -> list[ExperimentRecord]:
    """Run every cell; rows are flushed to ``csv_path`` (default
    ``<output_dir>/records.csv``) as soon as each cell finishes."""
    corpus = config.corpus or tuple(bundled_benchmarks())
    if csv_path is None:
        csv_path = Path(config.output_dir) / "records.csv"
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    records: list[ExperimentRecord] = []
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        fh.flush()
        for entry in corpus:
            try:
                circuit, _ = load_real(_resolve(entry))
            except (OSError, RealParseError) as exc:
                log.error("skipping benchmark %s: %s", entry, exc)
                continue
            L = circuit.depth
            if L < 2:
                log.error("skipping benchmark %s: %d layer(s), nothing to split", entry, L)
                continue
            lo, hi = config.n_range or (1, L - 1)
            for n in range(max(lo, 1), min(hi, L - 1) + 1):
                for seed in range(config.seeds):
                    for attack in config.attacks:
                        if attack == "brute_force" and circuit.num_qubits > config.brute_force_max_qubits:
                            continue
                        rec = run_cell(circuit, n, seed, attack, config, circuit.name)
                        log.info("%s n=%d seed=%d %s t=%d %s", rec.benchmark, n, seed, attack, rec.t, rec.outcome)
                        writer.writerow(rec.row())
                        fh.flush()
                        records.append(rec)
    return records


def write_records(records: Iterable[ExperimentRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.row())


def read_records(path: str | Path) -> list[ExperimentRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        if tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        return [ExperimentRecord.from_row(row) for row in reader]


@dataclass
class Series:
    benchmark: str
    m: int
    points: list[tuple[int, float]] = field(default_factory=list)


def median_series(records: Sequence[ExperimentRecord], attack: str = "hierarchical") -> list[Series]:
    """Median t over seeds for each (benchmark, n), in order of first appearance."""
    cells: dict[str, dict[int, list[int]]] = {}
    sizes: dict[str, int] = {}
    for rec in records:
        if rec.attack != attack:
            continue
        cells.setdefault(rec.benchmark, {}).setdefault(rec.n, []).append(rec.t)
        sizes[rec.benchmark] = rec.m
    return [
        Series(name, sizes[name], [(n, float(np.median(ts))) for n, ts in sorted(by_n.items())])
        for name, by_n in cells.items()
    ]


COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def _ticks(hi: float, count: int = 5) -> list[float]:
    if hi <= 0:
        return [0.0]
    raw = hi / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(s * mag for s in (1, 2, 5, 10) if s * mag >= raw)
    return [i * step for i in range(int(hi // step) + 1)]


def emit_chart(
    records: Sequence[ExperimentRecord],
    path: str | Path,
    attack: str = "hierarchical",
    title: str = "Oracle queries vs. Split-2 depth",
) -> list[Series]:
    """Write an SVG line chart (x = n, y = median t) and ``<path>.csv`` with its points."""
    series = median_series(records, attack)
    if not series:
        raise ValueError("no records to plot")
    path = Path(path)
    width, height = 900, 540
    left, right, top, bottom = 80, 220, 60, 70
    pw, ph = width - left - right, height - top - bottom

    xs = [n for s in series for n, _ in s.points]
    x_lo, x_hi = min(xs), max(xs)
    y_hi = max(t for s in series for _, t in s.points)
    yt = _ticks(y_hi * 1.05 if y_hi > 0 else 1.0)
    y_top = max(yt[-1], y_hi) or 1.0

    def px(n: float) -> float:
        return left + (pw / 2 if x_hi == x_lo else (n - x_lo) / (x_hi - x_lo) * pw)

    def py(t: float) -> float:
        return top + ph - t / y_top * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{left + pw / 2:.1f}" y="30" text-anchor="middle" font-size="18">{_escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="#000"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="#000"/>',
    ]
    for n in range(x_lo, x_hi + 1):
        x = px(n)
        out.append(f'<line x1="{x:.1f}" y1="{top + ph}" x2="{x:.1f}" y2="{top + ph + 5}" stroke="#000"/>')
        out.append(f'<text x="{x:.1f}" y="{top + ph + 20}" text-anchor="middle" font-size="12">{n}</text>')
    for t in yt:
        y = py(t)
        out.append(f'<line x1="{left}" y1="{y:.1f}" x2="{left + pw}" y2="{y:.1f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="12">{t:g}</text>')
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 25}" text-anchor="middle" font-size="14">'
        "number of layers in Split 2 (n)</text>"
    )
    out.append(
        f'<text x="20" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 20 {top + ph / 2:.1f})">oracle queries t (median)</text>'
    )
    for i, s in enumerate(series):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{px(n):.1f},{py(t):.1f}" for n, t in s.points)
        out.append(
            f'<polyline data-benchmark="{_escape(s.benchmark)}" points="{pts}" '
            f'fill="none" stroke="{color}" stroke-width="2"/>'
        )
        for n, t in s.points:
            out.append(f'<circle cx="{px(n):.1f}" cy="{py(t):.1f}" r="3" fill="{color}"/>')
        ly = top + 10 + 22 * i
        lx = left + pw + 20
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(
            f'<text class="legend" x="{lx + 32}" y="{ly + 4}" font-size="12">'
            f"{_escape(s.benchmark)} ({s.m} qubits)</text>"
        )
    out.append("</svg>")
    path.write_text("\n".join(out) + "\n", encoding="utf-8")

    with open(path.with_suffix(".csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["benchmark", "m", "n", "median_t"])
        for s in series:
            for n, t in s.points:
                writer.writerow([s.benchmark, s.m, n, f"{t:g}"])
    return series
