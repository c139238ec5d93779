"""Landmark selection: the small reference subset that anchors out-of-sample work.

Both selectors are pure functions of their inputs and seed. Selections
persist as JSON ``{method, seed, indices}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dissimilarity import DissimilarityMatrix

__all__ = [
    "LandmarkSet",
    "random_landmarks",
    "farthest_point_sampling",
    "save_landmarks",
    "load_landmarks",
]

SELECTION_METHODS = ("random", "fps")


@dataclass(frozen=True)
class LandmarkSet:
    """Ordered, duplicate-free indices into a reference object set."""

    indices: tuple[int, ...]
    method: str
    seed: int

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        if not indices:
            raise ValueError("landmark set must contain at least one index")
        if len(set(indices)) != len(indices):
            raise ValueError("landmark indices must be distinct")
        if any(i < 0 for i in indices):
            raise ValueError("landmark indices must be non-negative")
        if self.method not in SELECTION_METHODS:
            raise ValueError(f"unknown selection method: {self.method!r}")
        object.__setattr__(self, "indices", indices)

    def __len__(self) -> int:
        return len(self.indices)


def random_landmarks(n: int, count: int, seed: int) -> LandmarkSet:
    """``count`` distinct indices drawn uniformly from ``range(n)``."""
    if not 1 <= count <= n:
        raise ValueError(f"count must be in [1, {n}], got {count}")
    rng = np.random.default_rng(seed)
    chosen = rng.permutation(n)[:count]
    return LandmarkSet(tuple(int(i) for i in chosen), "random", seed)


def farthest_point_sampling(
    delta: DissimilarityMatrix, count: int, seed: int
) -> LandmarkSet:
    """Greedy max-min selection over a full symmetric dissimilarity matrix.

    The first index is uniform random from ``seed``; every later pick
    maximizes the minimum dissimilarity to the already-selected set, breaking
    ties on the lowest index, which makes the selection reproducible.
    """
    if not delta.symmetric:
        raise ValueError("farthest point sampling requires a symmetric matrix")
    n = delta.values.shape[0]
    if not 1 <= count <= n:
        raise ValueError(f"count must be in [1, {n}], got {count}")
    rng = np.random.default_rng(seed)
    first = int(rng.integers(n))
    chosen = [first]
    # -1 marks already-selected rows so argmax never revisits them
    min_dist = delta.values[first].copy()
    min_dist[first] = -1.0
    for _ in range(count - 1):
        nxt = int(np.argmax(min_dist))
        chosen.append(nxt)
        np.minimum(min_dist, delta.values[nxt], out=min_dist)
        min_dist[nxt] = -1.0
    return LandmarkSet(tuple(chosen), "fps", seed)


def save_landmarks(landmarks: LandmarkSet, path) -> None:
    doc = {
        "method": landmarks.method,
        "seed": int(landmarks.seed),
        "indices": list(landmarks.indices),
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_landmarks(path) -> LandmarkSet:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return LandmarkSet(tuple(doc["indices"]), doc["method"], doc["seed"])
