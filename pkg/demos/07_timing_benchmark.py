"""Evaluation-time scaling: one shadow evaluation vs register size.

At depth floor(log2 n) the cone size grows with n only through the
depth, so the wall time stays polynomial in n; at fixed depth it is
flat.  Writes the CSV consumed by plotkit's timing plot.
"""

from also.cli import bench_eval_time

rows = bench_eval_time([4, 8, 12, 16, 20, 24, 28, 30], repeats=3,
                       shadow_count=10_000,
                       out_path="demos/output/bench.csv")
print(f"{'n':>4} {'d':>3} {'seconds':>10}")
for row in rows:
    print(f"{row['n']:>4} {row['d']:>3} {row['seconds_mean']:>10.4f}")

flat = bench_eval_time([10, 20, 30], repeats=3, shadow_count=10_000, depth=2)
print("\nfixed depth 2 (flat in n):")
for row in flat:
    print(f"{row['n']:>4} {row['d']:>3} {row['seconds_mean']:>10.4f}")
