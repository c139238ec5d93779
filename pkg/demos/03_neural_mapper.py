"""Train the feed-forward mapper and race it against per-point optimization.

The network learns the function from landmark-distance profiles to
coordinates using the reference set itself as training data (inputs: each
reference point's distances to the landmarks; labels: its coordinates).
After training, placing a new point is a single forward pass.

Run:  python demos/03_neural_mapper.py
"""

import numpy as np

from lsmds import (
    DescentOptions,
    ObjectSet,
    PointQuery,
    TrainingSet,
    cross_matrix,
    embed,
    embed_point,
    evaluate_embedding,
    farthest_point_sampling,
    generate_names,
    init_model,
    pairwise_matrix,
    predict_point,
    split_reference_holdout,
    time_op,
    train,
)

dataset = generate_names(330, seed=21)
reference, holdout = split_reference_holdout(dataset, 300, 30, seed=21)
delta = pairwise_matrix(ObjectSet.from_strings(reference), "levenshtein")
config, trace = embed(delta, dimension=5, opts=DescentOptions(seed=4))
cross = cross_matrix(
    ObjectSet.from_strings(reference), ObjectSet.from_strings(holdout), "levenshtein"
)

count = 40
chosen = farthest_point_sampling(delta, count, seed=5)
idx = np.asarray(chosen.indices)
landmark_coords = config.coords[idx]
holdout_profiles = cross.values[idx, :].T

# training data: every reference point's landmark profile and coordinates
data = TrainingSet(delta.values[:, idx], config.coords)
model = init_model(count, config.dimension, seed=6)
model, losses = train(model, data)
print(f"training loss: {losses[0]:.3f} -> {losses[-1]:.3f} over {len(losses) - 1} epochs")

placed_nn = np.array([predict_point(model, p) for p in holdout_profiles])
placed_opt = np.array(
    [embed_point(PointQuery(p, landmark_coords))[0] for p in holdout_profiles]
)
for tag, placed in (("neural", placed_nn), ("optimize", placed_opt)):
    report = evaluate_embedding(tag, config, placed, cross.values, count)
    print(f"{tag:9s} total error: {report.total_error:8.1f}")

profile = holdout_profiles[0]
query = PointQuery(profile, landmark_coords)
nn_time = time_op(lambda: predict_point(model, profile), repeats=50).mean
opt_time = time_op(lambda: embed_point(query), repeats=50).mean
print(
    f"\nper-point placement: neural {nn_time * 1e6:7.1f} us, "
    f"optimize {opt_time * 1e6:7.1f} us ({opt_time / nn_time:.0f}x slower)"
)
print("training is paid once; afterwards every placement is a forward pass")
