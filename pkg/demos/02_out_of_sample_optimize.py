"""Place new points into a fixed configuration by per-point optimization.

Two demonstrations:
  1. a sanity check on planted Euclidean data, where the true position is
     known and the placement recovers it almost exactly;
  2. the name workflow: hold out names, keep the reference configuration
     fixed, and place each holdout using only its distances to L landmarks,
     then evaluate the distortion against every reference point.

Run:  python demos/02_out_of_sample_optimize.py
"""

import numpy as np

from lsmds import (
    DescentOptions,
    ObjectSet,
    PointQuery,
    cross_matrix,
    embed,
    embed_point,
    evaluate_embedding,
    farthest_point_sampling,
    generate_names,
    pairwise_matrix,
    split_reference_holdout,
)

# --- 1. planted-point recovery ------------------------------------------------
rng = np.random.default_rng(0)
landmark_coords = rng.uniform(-1, 1, (16, 2))
truth = rng.uniform(-1, 1, 2)
query = PointQuery(np.linalg.norm(landmark_coords - truth, axis=1), landmark_coords)
recovered, iterations = embed_point(query)
print("planted point   :", np.round(truth, 6))
print(f"recovered point : {np.round(recovered, 6)} in {iterations} iterations")

# --- 2. names: landmark placement of held-out points ---------------------------
dataset = generate_names(260, seed=11)
reference, holdout = split_reference_holdout(dataset, 240, 20, seed=11)

delta = pairwise_matrix(ObjectSet.from_strings(reference), "levenshtein")
config, trace = embed(delta, dimension=5, opts=DescentOptions(seed=2))
print(f"\nreference configuration: stress {trace[-1]:.3f}")

cross = cross_matrix(
    ObjectSet.from_strings(reference), ObjectSet.from_strings(holdout), "levenshtein"
)
for count in (10, 60):
    chosen = farthest_point_sampling(delta, count, seed=3)
    idx = np.asarray(chosen.indices)
    placed = np.empty((len(holdout), config.dimension))
    for j in range(len(holdout)):
        placed[j], _ = embed_point(PointQuery(cross.values[idx, j], config.coords[idx]))
    report = evaluate_embedding("optimize", config, placed, cross.values, count)
    print(
        f"L={count:3d}: total error {report.total_error:8.1f}, "
        f"mean per-point error {report.per_point_errors.mean():6.1f}"
    )
print("more landmarks -> lower distortion against the full reference set")
