"""Sweep the Split-2 depth over the bundled benchmarks and chart the query counts.

    python3 demos/02_depth_sweep.py [seeds]

Writes demos/out/records.csv, demos/out/chart.svg and demos/out/chart.csv.
"""
import sys
from pathlib import Path

from qsplit.bench import SweepConfig, emit_chart, median_series, run_sweep

out = Path(__file__).parent / "out"
seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 3

config = SweepConfig(seeds=seeds, output_dir=str(out), record_wall_time=False)
records = run_sweep(config)
print(f"{len(records)} runs, outcomes: {sorted({r.outcome for r in records})}")

# Median t over seeds, one row per benchmark
for s in median_series(records):
    row = " ".join(f"{t:g}" for _, t in s.points)
    print(f"{s.benchmark:>9} ({s.m:2d} qubits)  n=1..{s.points[-1][0]}: {row}")

emit_chart(records, out / "chart.svg")
print("chart:", out / "chart.svg")
