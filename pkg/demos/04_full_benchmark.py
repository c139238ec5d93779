"""Run the end-to-end benchmark pipeline at a small scale.

Chains every stage (names -> distance matrix -> reference embedding ->
landmark grid -> both out-of-sample methods -> evaluation) into one
plot-ready CSV, then prints it as a table. Artifacts land in
``demo_benchmark_out/`` and the run is fully seeded, so re-running
reproduces identical numbers (timings aside).

The same sweep is available from the command line:
    lsmds benchmark --out demo_benchmark_out --n-reference 150 ...

Run:  python demos/04_full_benchmark.py
"""

import csv

from lsmds import DescentOptions, PipelineConfig, TrainOptions, run_benchmark

cfg = PipelineConfig(
    output_dir="demo_benchmark_out",
    n_reference=150,
    n_holdout=25,
    dimension=5,
    landmark_grid=(10, 20, 40, 80),
    landmark_method="fps",
    embed_descent=DescentOptions(max_iters=300),
    train=TrainOptions(epochs=60),
)
path = run_benchmark(cfg)
print(f"wrote {path}\n")

with open(path, newline="") as fh:
    rows = list(csv.DictReader(fh))
print(f"{'method':9s} {'L':>4s} {'total_error':>12s} {'mean_rt':>12s} {'train_s':>8s}")
for row in rows:
    train_s = f"{float(row['train_seconds']):8.2f}" if row["train_seconds"] else f"{'-':>8s}"
    print(
        f"{row['method']:9s} {row['n_landmarks']:>4s} "
        f"{float(row['total_error']):12.1f} "
        f"{float(row['mean_rt_seconds']) * 1e3:10.3f}ms {train_s}"
    )
