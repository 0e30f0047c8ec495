"""Split a small benchmark, hide the wiring, and recover it through the oracle.

    python3 demos/01_split_and_attack.py
"""
from qsplit import AttackConfig, Oracle, interaction_components, load_bundled, recombine, recover, split
from qsplit.sim import equivalent_on_basis

circuit, header = load_bundled("alu")
print(circuit)
print("inputs:", header.inputs, " depth:", circuit.depth)

# Put the last two layers in Split 2. The wire permutation is drawn from the seed.
inst = split(circuit, n=2, seed=7)
print("\nSplit 1:", " ".join(map(str, inst.split1.gates)))
print("Split 2:", " ".join(map(str, inst.split2.gates)), "(on its own wire labels)")
print("hidden wiring pi =", inst.hidden.pi)

# The attacker only sees inst.public and talks to the oracle.
blocks = interaction_components(inst.split2)
print("\nSplit-2 blocks:", [b.sorted() for b in blocks])

oracle = Oracle(inst)
result = recover(inst.public, oracle, AttackConfig())
print("outcome:", result.outcome.value, " queries t =", result.t)
print("recovered pi_hat =", result.pi_hat)

for event in result.trace:
    print("  t={t:3d}  block {block_qubits}  candidate {candidate}  {decision}".format(**event))

rebuilt = recombine(inst.split1, result.pi_hat, inst.split2)
print("\nrebuilt circuit equivalent to the source:", equivalent_on_basis(circuit, rebuilt))
