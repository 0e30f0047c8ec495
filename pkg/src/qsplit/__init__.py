"""Split compilation of quantum circuits and oracle-guided recovery of the hidden wiring."""
from .attack import (
    AttackConfig,
    Outcome,
    RecoveredMapping,
    brute_force,
    prune_permutations,
    query_upper_bound,
    recover,
    sensitization_pair,
    test_block_candidate,
)
from .bench import ExperimentRecord, SweepConfig, emit_chart, read_records, run_sweep
from .circuit import Circuit, Gate, GateKind, QubitBlock, interaction_components, layers
from .oracle import NoiseModel, Oracle
from .revlib import bundled_benchmarks, load_bundled, load_real, parse_real, serialize_real
from .sim import PureState, apply, apply_inverse, equivalent_on_basis, fidelity_mixed, fidelity_pure, reduced
from .split import HiddenMapping, PublicView, SplitInstance, recombine, split

__version__ = "0.1.0"

__all__ = [
    "AttackConfig",
    "Circuit",
    "ExperimentRecord",
    "Gate",
    "GateKind",
    "HiddenMapping",
    "NoiseModel",
    "Oracle",
    "Outcome",
    "PublicView",
    "PureState",
    "QubitBlock",
    "RecoveredMapping",
    "SplitInstance",
    "SweepConfig",
    "apply",
    "apply_inverse",
    "brute_force",
    "bundled_benchmarks",
    "emit_chart",
    "equivalent_on_basis",
    "fidelity_mixed",
    "fidelity_pure",
    "interaction_components",
    "layers",
    "load_bundled",
    "load_real",
    "parse_real",
    "prune_permutations",
    "query_upper_bound",
    "read_records",
    "recombine",
    "recover",
    "reduced",
    "run_sweep",
    "sensitization_pair",
    "serialize_real",
    "split",
    "test_block_candidate",
]
