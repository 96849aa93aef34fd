"""Quantum autoencoder, desk scale: compress a two-state ensemble so the
trailing trash qubits decouple to |0>.

The cost is the trash-register miss probability (1 - J[B]); a perfect
encoder exists by construction for the generated ensembles, so the gap
to zero is attributable to the optimizer and estimator, not the circuit.
"""

from also.cli import ExperimentConfig, run_experiment

BASE = dict(task="autoencoder", n=6, d=2, n_b=2,
            optimizer="spsa:iterations=600,exponent=0.3",
            instances=3, seed=7)

for backend in ("exact", "shadow:50000"):
    cfg = ExperimentConfig.from_dict({
        **BASE, "backend": backend,
        "out_dir": f"demos/output/ae6-{backend.replace(':', '-')}"})
    summary = run_experiment(cfg)
    agg = summary["aggregate"]
    print(f"{backend:>13}: best trash cost "
          f"{agg['best_exact_cost']['mean']:.4f} "
          f"+- {agg['best_exact_cost']['std']:.4f}")

print("\nthe same shadow file could drive a state-preparation objective "
      "too; measurements are task-independent")
