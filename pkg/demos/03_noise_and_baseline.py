"""Noisy oracles, and the exhaustive baseline next to the hierarchical attack.

    python3 demos/03_noise_and_baseline.py
"""
import numpy as np

from qsplit import AttackConfig, NoiseModel, Oracle, brute_force, load_bundled, recombine, recover, split
from qsplit.sim import equivalent_on_basis

circuit, _ = load_bundled("ncv4")

# Every query returns a state with fidelity 1 - p to the ideal output.
print("noise p   recovered   silent wrong   median t")
for p in (0.0, 0.005, 0.01, 0.02, 0.05):
    ok = wrong = 0
    ts = []
    for trial in range(20):
        inst = split(circuit, 1, trial)
        result = recover(inst.public, Oracle(inst, NoiseModel(p=p, seed=trial)), AttackConfig(seed=trial))
        ts.append(result.t)
        if result.recovered:
            if equivalent_on_basis(circuit, recombine(inst.split1, result.pi_hat, inst.split2)):
                ok += 1
            else:
                wrong += 1
    print(f"{p:7.3f}   {ok:6d}/20   {wrong:12d}   {np.median(ts):8g}")

# The baseline walks all 4! wirings. With random basis inputs a single check
# often accepts a wrong wiring early; random product inputs do not.
print("\nseed  pi            hier t   brute t (basis, right?)   brute t (product, right?)")
for seed in range(5):
    inst = split(circuit, 3, seed)
    h = recover(inst.public, Oracle(inst), AttackConfig(seed=seed))
    row = []
    for dist in ("random_basis", "random_product"):
        b = brute_force(inst.public, Oracle(inst), AttackConfig(seed=seed, input_distribution=dist))
        right = b.recovered and equivalent_on_basis(circuit, recombine(inst.split1, b.pi_hat, inst.split2))
        row.append(f"{b.t:3d} ({'yes' if right else 'no'})")
    print(f"{seed:4d}  {str(inst.hidden.pi):12}  {h.t:6d}   {row[0]:>22}   {row[1]:>24}")
