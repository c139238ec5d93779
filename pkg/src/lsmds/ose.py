"""Out-of-sample embedding by per-point stress optimization.

A new object is placed into a fixed configuration by minimizing the squared
differences between its distances to the landmark coordinates and its
measured dissimilarities to the landmark objects. Only the new point moves;
the landmarks never do. Each placement touches exactly the L landmark
dissimilarities it is given.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .descent import COINCIDENCE_EPS, DescentOptions, minimize
from .errors import NumericalFailureError

__all__ = [
    "PointQuery",
    "DEFAULT_POINT_OPTIONS",
    "point_stress",
    "point_stress_gradient",
    "embed_point",
    "embed_batch",
    "save_batch_deltas",
    "load_batch_deltas",
]

# per-point problems are tiny, so a tight tolerance costs almost nothing
DEFAULT_POINT_OPTIONS = DescentOptions(max_iters=200, tol=1e-8, init="given")


@dataclass(frozen=True)
class PointQuery:
    """Dissimilarities from one new object to L landmarks, plus the fixed
    landmark coordinates (L x K)."""

    deltas: np.ndarray
    landmark_coords: np.ndarray

    def __post_init__(self):
        deltas = np.asarray(self.deltas, dtype=np.float64)
        coords = np.asarray(self.landmark_coords, dtype=np.float64)
        if deltas.ndim != 1:
            raise ValueError("deltas must be a 1-D vector")
        if coords.ndim != 2:
            raise ValueError("landmark coordinates must be a 2-D L x K matrix")
        if deltas.shape[0] != coords.shape[0]:
            raise ValueError(
                f"{deltas.shape[0]} dissimilarities for {coords.shape[0]} landmarks"
            )
        if not (np.all(np.isfinite(deltas)) and np.all(np.isfinite(coords))):
            raise ValueError("query values must be finite")
        if np.any(deltas < 0):
            raise ValueError("dissimilarities must be non-negative")
        deltas = deltas.copy()
        deltas.flags.writeable = False
        coords = coords.copy()
        coords.flags.writeable = False
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "landmark_coords", coords)

    @property
    def n_landmarks(self) -> int:
        return self.deltas.shape[0]

    @property
    def dimension(self) -> int:
        return self.landmark_coords.shape[1]


def _check_point(y_hat, query: PointQuery) -> np.ndarray:
    y = np.asarray(y_hat, dtype=np.float64)
    if y.shape != (query.dimension,):
        raise ValueError(f"point must have shape ({query.dimension},), got {y.shape}")
    return y


def point_stress(y_hat, query: PointQuery) -> float:
    """Sum over landmarks of squared (distance - dissimilarity) residuals."""
    y = _check_point(y_hat, query)
    d = np.linalg.norm(query.landmark_coords - y, axis=1)
    r = d - query.deltas
    return float(np.dot(r, r))


def point_stress_gradient(y_hat, query: PointQuery) -> np.ndarray:
    """Exact gradient of :func:`point_stress`; landmarks coincident with the
    point contribute zero."""
    y = _check_point(y_hat, query)
    d = np.linalg.norm(query.landmark_coords - y, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (d - query.deltas) / d
    w[d < COINCIDENCE_EPS] = 0.0
    return 2.0 * (w.sum() * y - w @ query.landmark_coords)


def embed_point(
    query: PointQuery,
    opts: DescentOptions | None = None,
    start: np.ndarray | None = None,
) -> tuple[np.ndarray, int]:
    """Place one new point by descent from the all-zeros start.

    ``start`` overrides the zero initial guess, which is useful for probing
    sensitivity to the starting point. Returns the coordinates and the
    number of accepted iterations. Deterministic for fixed inputs.
    """
    opts = opts or DEFAULT_POINT_OPTIONS
    if start is None:
        x0 = np.zeros(query.dimension)
    else:
        x0 = _check_point(start, query)
    y, _, iterations = minimize(
        lambda y: point_stress(y, query),
        lambda y: point_stress_gradient(y, query),
        x0,
        opts,
    )
    return y, iterations


def embed_batch(queries, opts: DescentOptions | None = None) -> np.ndarray:
    """Embed many queries that share one landmark coordinate matrix.

    Row i of the result equals ``embed_point(queries[i], opts)``. Failures
    are re-raised with the offending point index. The shared landmark
    matrix is read-only and never modified.
    """
    queries = list(queries)
    if not queries:
        return np.zeros((0, 0))
    reference = queries[0].landmark_coords
    for i, q in enumerate(queries[1:], start=1):
        if not np.array_equal(q.landmark_coords, reference):
            raise ValueError(f"query {i} does not share the landmark coordinates")
    out = np.empty((len(queries), queries[0].dimension), dtype=np.float64)
    for i, q in enumerate(queries):
        try:
            out[i], _ = embed_point(q, opts)
        except NumericalFailureError as exc:
            raise NumericalFailureError(f"point {i}: {exc}") from exc
    return out


def save_batch_deltas(deltas: np.ndarray, path) -> None:
    """Write an M x L dissimilarity block as headerless CSV (one row per point)."""
    deltas = np.asarray(deltas, dtype=np.float64)
    if deltas.ndim != 2:
        raise ValueError("batch deltas must be a 2-D M x L matrix")
    with Path(path).open("w", encoding="utf-8") as fh:
        np.savetxt(fh, deltas, fmt="%.17g", delimiter=",")


def load_batch_deltas(path) -> np.ndarray:
    return np.loadtxt(Path(path), delimiter=",", ndmin=2, dtype=np.float64)
