"""State preparation, desk scale: the same optimization driven by the
three estimator backends.

The shadow backend pays its measurement budget once and then evaluates
for free; the shot backend pays per evaluation.  Full-size runs live
behind `also run --preset sp8` / `--preset sp30`.
"""

from also.cli import ExperimentConfig, run_experiment

BASE = dict(task="state-prep", n=6, d=2, target_kind="compatible",
            optimizer="spsa:iterations=400,exponent=0.5",
            instances=3, seed=42)

for backend in ("exact", "shadow:50000", "shots:10"):
    cfg = ExperimentConfig.from_dict({
        **BASE, "backend": backend,
        "out_dir": f"demos/output/sp6-{backend.replace(':', '-')}"})
    summary = run_experiment(cfg)
    agg = summary["aggregate"]
    copies = agg["copies_total"]["mean"]
    label = "oo" if summary["copies_label"] == "infinite" else f"{copies:.0f}"
    print(f"{backend:>13}: best infidelity "
          f"{agg['best_infidelity']['mean']:.4f} "
          f"+- {agg['best_infidelity']['std']:.4f}   copies {label}")

print("\ntraces, curves and summaries written under demos/output/")
