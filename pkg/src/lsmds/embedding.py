"""Least-squares embedding of a dissimilarity matrix into Euclidean space.

The fit minimizes the raw stress (the doubled sum over point pairs of squared
differences between configuration distances and input dissimilarities) by
steepest descent, and reports the normalized stress
``sqrt(raw / sum_of_squared_dissimilarities)`` per iteration.

Configurations persist as CSV with header ``id,c1,...,cK``; stress traces as
CSV ``iter,normalized_stress``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from .descent import COINCIDENCE_EPS, DescentOptions, minimize
from .dissimilarity import DissimilarityMatrix
from .errors import DegenerateInputError

__all__ = [
    "Configuration",
    "raw_stress",
    "normalized_stress",
    "stress_gradient",
    "embed",
    "save_configuration",
    "load_configuration",
    "save_stress_trace",
    "load_stress_trace",
]


@dataclass(frozen=True)
class Configuration:
    """An N x K matrix of embedded coordinates."""

    coords: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise ValueError("coordinates must form a 2-D N x K matrix with K >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coordinates must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    @property
    def n_points(self) -> int:
        return self.coords.shape[0]

    @property
    def dimension(self) -> int:
        return self.coords.shape[1]


def _check_pair(config: Configuration, delta: DissimilarityMatrix) -> None:
    if not delta.symmetric:
        raise ValueError("stress requires a symmetric dissimilarity matrix")
    n = config.n_points
    if delta.values.shape != (n, n):
        raise ValueError(
            f"configuration has {n} points but matrix is {delta.values.shape}"
        )


def _raw_stress(coords: np.ndarray, dvals: np.ndarray) -> float:
    d = cdist(coords, coords)
    iu = np.triu_indices(coords.shape[0], k=1)
    r = d[iu] - dvals[iu]
    return 2.0 * float(np.dot(r, r))


def _stress_gradient(coords: np.ndarray, dvals: np.ndarray) -> np.ndarray:
    d = cdist(coords, coords)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (d - dvals) / d
    w[d < COINCIDENCE_EPS] = 0.0
    return 4.0 * (w.sum(axis=1)[:, np.newaxis] * coords - w @ coords)


def _squared_delta_sum(dvals: np.ndarray) -> float:
    iu = np.triu_indices(dvals.shape[0], k=1)
    return 2.0 * float(np.dot(dvals[iu], dvals[iu]))


def raw_stress(config: Configuration, delta: DissimilarityMatrix) -> float:
    """Sum over all ordered point pairs of squared distance residuals.

    Computed over unordered pairs and doubled, which is identical to the
    full double sum because the diagonal contributes zero.
    """
    _check_pair(config, delta)
    return _raw_stress(config.coords, delta.values)


def normalized_stress(config: Configuration, delta: DissimilarityMatrix) -> float:
    """``sqrt(raw_stress / sum of squared dissimilarities)``, both sums taken
    over ordered pairs. Invariant to jointly rescaling coordinates and
    dissimilarities."""
    _check_pair(config, delta)
    denom = _squared_delta_sum(delta.values)
    if denom == 0.0:
        raise DegenerateInputError("all dissimilarities are zero")
    return math.sqrt(_raw_stress(config.coords, delta.values) / denom)


def stress_gradient(config: Configuration, delta: DissimilarityMatrix) -> np.ndarray:
    """Exact gradient of :func:`raw_stress` with respect to every coordinate.

    Pairs closer than the coincidence threshold contribute zero, the
    standard subgradient choice at the removable singularity.
    """
    _check_pair(config, delta)
    return _stress_gradient(config.coords, delta.values)


def embed(
    delta: DissimilarityMatrix,
    dimension: int,
    opts: DescentOptions | None = None,
    x0: np.ndarray | None = None,
) -> tuple[Configuration, np.ndarray]:
    """Fit a ``dimension``-D configuration to ``delta`` by stress descent.

    Returns the configuration and the per-iteration normalized-stress trace
    (entry 0 is the starting stress; the trace never increases). The fit is
    deterministic for a fixed ``opts.seed``.
    """
    opts = opts or DescentOptions()
    if not delta.symmetric:
        raise ValueError("embedding requires a symmetric dissimilarity matrix")
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    dvals = delta.values
    n = dvals.shape[0]
    if opts.init == "given":
        if x0 is None:
            raise ValueError("init='given' requires an explicit starting configuration")
        start = np.asarray(x0, dtype=np.float64)
        if start.shape != (n, dimension):
            raise ValueError(f"starting configuration must have shape {(n, dimension)}")
    else:
        rng = np.random.default_rng(opts.seed)
        start = rng.uniform(-1.0, 1.0, size=(n, dimension))
    if n == 1:
        return Configuration(start), np.zeros(1)
    denom = _squared_delta_sum(dvals)
    if denom == 0.0:
        raise DegenerateInputError("dissimilarity matrix is all zeros")
    coords, trace, _ = minimize(
        lambda x: _raw_stress(x, dvals),
        lambda x: _stress_gradient(x, dvals),
        start,
        opts,
    )
    return Configuration(coords), np.sqrt(np.asarray(trace) / denom)


def save_configuration(config: Configuration, path) -> None:
    """Write coordinates as CSV ``id,c1,...,cK``; ids are row indices."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id"] + [f"c{k + 1}" for k in range(config.dimension)])
        for i, row in enumerate(config.coords):
            writer.writerow([i] + [repr(float(v)) for v in row])


def load_configuration(path) -> Configuration:
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[0] != "id":
            raise ValueError(f"not a configuration file: {path}")
        rows = [[float(v) for v in row[1:]] for row in reader if row]
    return Configuration(np.asarray(rows, dtype=np.float64))


def save_stress_trace(trace: np.ndarray, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iter", "normalized_stress"])
        for i, value in enumerate(np.asarray(trace, dtype=np.float64)):
            writer.writerow([i, repr(float(value))])


def load_stress_trace(path) -> np.ndarray:
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        return np.asarray([float(row[1]) for row in reader if row], dtype=np.float64)
