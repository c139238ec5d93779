"""Embed a synthetic name dataset into Euclidean space.

Walks the first half of the workflow: generate unique entity names, build
their pairwise edit-distance matrix, and fit a low-dimensional configuration
by stress descent. Prints the stress trajectory so you can watch the fit
converge.

Run:  python demos/01_embed_names.py
"""

import numpy as np

from lsmds import DescentOptions, ObjectSet, embed, generate_names, pairwise_matrix

# a modest dataset keeps this demo under a few seconds
dataset = generate_names(200, seed=7)
print(f"generated {len(dataset)} unique names, e.g. {dataset.names[:3]}")

objects = ObjectSet.from_strings(dataset.names)
delta = pairwise_matrix(objects, "levenshtein")
values = delta.values[np.triu_indices(len(dataset), k=1)]
print(
    f"edit distances: min {values.min():.0f}, median {np.median(values):.0f}, "
    f"max {values.max():.0f}"
)

config, trace = embed(delta, dimension=7, opts=DescentOptions(seed=1))
print(f"\nfit a {config.n_points} x {config.dimension} configuration")
print(f"normalized stress per iteration (first/last few):")
shown = list(enumerate(trace))
for i, value in shown[:3] + shown[-3:]:
    print(f"  iter {i:4d}: {value:.5f}")
print(f"\nfinal normalized stress: {trace[-1]:.4f} after {len(trace) - 1} iterations")
