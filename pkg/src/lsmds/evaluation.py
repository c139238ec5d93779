"""Quality metrics and timing for out-of-sample embeddings.

The per-point error sums squared distance distortions against ALL reference
points, not just the landmarks the placement used, so it measures how well
the full geometry survives. The aggregate error additionally divides each
squared term by its dissimilarity; terms with a near-zero dissimilarity are
skipped and counted.

Reports persist as JSON plus a per-point CSV
``point_id,perr,perr_norm,seconds``.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .embedding import Configuration
from .errors import DegenerateInputError

__all__ = [
    "ZERO_DELTA_EPS",
    "TimingStats",
    "OseReport",
    "point_error",
    "normalized_point_error",
    "total_error",
    "skipped_term_count",
    "time_op",
    "evaluate_embedding",
    "save_report",
    "load_report",
    "save_report_csv",
]

# terms whose dissimilarity falls below this are skipped in total_error
ZERO_DELTA_EPS = 1e-12

METHOD_TAGS = ("optimize", "neural")


@dataclass(frozen=True)
class TimingStats:
    """Wall-clock samples from a monotonic clock, in seconds."""

    samples: tuple[float, ...]

    @property
    def mean(self) -> float:
        return float(np.mean(self.samples))

    @property
    def min(self) -> float:
        return float(np.min(self.samples))

    @property
    def max(self) -> float:
        return float(np.max(self.samples))


def time_op(op: Callable[[], object], repeats: int) -> TimingStats:
    """Time ``repeats`` calls of ``op`` with a monotonic clock.

    One warm-up call runs first and is discarded, so cold-start effects do
    not contaminate sub-millisecond comparisons. The operation should already
    hold its inputs; loading them is not part of the measurement.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    op()
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        op()
        samples.append(time.perf_counter() - t0)
    return TimingStats(tuple(samples))


def point_error(
    reference: Configuration, embedded_point, deltas_full: np.ndarray
) -> float:
    """Squared distortion of one new point against every reference point."""
    y = np.asarray(embedded_point, dtype=np.float64)
    deltas_full = np.asarray(deltas_full, dtype=np.float64)
    if y.shape != (reference.dimension,):
        raise ValueError(f"point must have shape ({reference.dimension},)")
    if deltas_full.shape != (reference.n_points,):
        raise ValueError(
            f"need one dissimilarity per reference point ({reference.n_points})"
        )
    d = np.linalg.norm(reference.coords - y, axis=1)
    r = deltas_full - d
    return float(np.dot(r, r))


def normalized_point_error(perr: float, deltas_full: np.ndarray) -> float:
    """Point error divided by the sum of the point's dissimilarities."""
    total = float(np.sum(np.asarray(deltas_full, dtype=np.float64)))
    if total <= 0.0:
        raise DegenerateInputError("dissimilarity sum is zero; cannot normalize")
    return perr / total


def total_error(
    reference: Configuration, embedded_points: np.ndarray, cross_delta: np.ndarray
) -> float:
    """Aggregate distortion of M new points, each squared term divided by its
    dissimilarity.

    ``cross_delta`` is N x M: rows follow the reference points, columns the
    new points. Terms with dissimilarity below ``ZERO_DELTA_EPS`` are skipped.
    """
    y = np.asarray(embedded_points, dtype=np.float64)
    cross = np.asarray(cross_delta, dtype=np.float64)
    if y.ndim != 2 or y.shape[1] != reference.dimension:
        raise ValueError("embedded points must be M x K matching the reference")
    if cross.shape != (reference.n_points, y.shape[0]):
        raise ValueError(
            f"cross dissimilarities must be {(reference.n_points, y.shape[0])}, "
            f"got {cross.shape}"
        )
    total = 0.0
    for j in range(y.shape[0]):
        d = np.linalg.norm(reference.coords - y[j], axis=1)
        keep = cross[:, j] >= ZERO_DELTA_EPS
        r = cross[keep, j] - d[keep]
        total += float(np.sum(r * r / cross[keep, j]))
    return total


def skipped_term_count(cross_delta: np.ndarray) -> int:
    """How many terms :func:`total_error` would skip for this cross matrix."""
    cross = np.asarray(cross_delta, dtype=np.float64)
    return int(np.sum(cross < ZERO_DELTA_EPS))


@dataclass(frozen=True)
class OseReport:
    """Per-point and aggregate quality plus timing for one embedding run."""

    method: str
    n_landmarks: int
    dimension: int
    n_reference: int
    n_points: int
    per_point_errors: np.ndarray
    normalized_per_point_errors: np.ndarray
    total_error: float
    per_point_seconds: np.ndarray | None = None
    skipped_zero_delta_terms: int = 0

    def __post_init__(self):
        if self.method not in METHOD_TAGS:
            raise ValueError(f"unknown method tag: {self.method!r}")
        errs = np.asarray(self.per_point_errors, dtype=np.float64)
        norm_errs = np.asarray(self.normalized_per_point_errors, dtype=np.float64)
        if errs.shape != (self.n_points,) or norm_errs.shape != (self.n_points,):
            raise ValueError("per-point vectors must have one entry per point")
        if not np.isfinite(self.total_error):
            raise ValueError("total error must be finite")
        errs = errs.copy()
        errs.flags.writeable = False
        norm_errs = norm_errs.copy()
        norm_errs.flags.writeable = False
        object.__setattr__(self, "per_point_errors", errs)
        object.__setattr__(self, "normalized_per_point_errors", norm_errs)
        if self.per_point_seconds is not None:
            secs = np.asarray(self.per_point_seconds, dtype=np.float64)
            if secs.shape != (self.n_points,):
                raise ValueError("need one timing sample per point")
            secs = secs.copy()
            secs.flags.writeable = False
            object.__setattr__(self, "per_point_seconds", secs)

    @property
    def timing(self) -> TimingStats | None:
        if self.per_point_seconds is None:
            return None
        return TimingStats(tuple(float(s) for s in self.per_point_seconds))


def evaluate_embedding(
    method: str,
    reference: Configuration,
    embedded_points: np.ndarray,
    cross_delta: np.ndarray,
    n_landmarks: int,
    per_point_seconds=None,
) -> OseReport:
    """Assemble the full quality report for one batch of embedded points."""
    y = np.asarray(embedded_points, dtype=np.float64)
    cross = np.asarray(cross_delta, dtype=np.float64)
    m = y.shape[0]
    errs = np.empty(m)
    norm_errs = np.empty(m)
    for j in range(m):
        errs[j] = point_error(reference, y[j], cross[:, j])
        norm_errs[j] = normalized_point_error(errs[j], cross[:, j])
    return OseReport(
        method=method,
        n_landmarks=int(n_landmarks),
        dimension=reference.dimension,
        n_reference=reference.n_points,
        n_points=m,
        per_point_errors=errs,
        normalized_per_point_errors=norm_errs,
        total_error=total_error(reference, y, cross),
        per_point_seconds=per_point_seconds,
        skipped_zero_delta_terms=skipped_term_count(cross),
    )


def save_report(report: OseReport, path) -> None:
    timing = report.timing
    doc = {
        "method": report.method,
        "n_landmarks": report.n_landmarks,
        "dimension": report.dimension,
        "n_reference": report.n_reference,
        "n_points": report.n_points,
        "per_point_errors": [float(v) for v in report.per_point_errors],
        "normalized_per_point_errors": [
            float(v) for v in report.normalized_per_point_errors
        ],
        "total_error": float(report.total_error),
        "per_point_seconds": None
        if report.per_point_seconds is None
        else [float(v) for v in report.per_point_seconds],
        "timing_mean_seconds": None if timing is None else timing.mean,
        "timing_min_seconds": None if timing is None else timing.min,
        "timing_max_seconds": None if timing is None else timing.max,
        "skipped_zero_delta_terms": report.skipped_zero_delta_terms,
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_report(path) -> OseReport:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    seconds = doc["per_point_seconds"]
    return OseReport(
        method=doc["method"],
        n_landmarks=doc["n_landmarks"],
        dimension=doc["dimension"],
        n_reference=doc["n_reference"],
        n_points=doc["n_points"],
        per_point_errors=np.asarray(doc["per_point_errors"], dtype=np.float64),
        normalized_per_point_errors=np.asarray(
            doc["normalized_per_point_errors"], dtype=np.float64
        ),
        total_error=doc["total_error"],
        per_point_seconds=None
        if seconds is None
        else np.asarray(seconds, dtype=np.float64),
        skipped_zero_delta_terms=doc["skipped_zero_delta_terms"],
    )


def save_report_csv(report: OseReport, path) -> None:
    """Per-point rows ``point_id,perr,perr_norm,seconds`` (seconds blank if absent)."""
    lines = ["point_id,perr,perr_norm,seconds"]
    for j in range(report.n_points):
        seconds = (
            ""
            if report.per_point_seconds is None
            else repr(float(report.per_point_seconds[j]))
        )
        lines.append(
            f"{j},{float(report.per_point_errors[j])!r},"
            f"{float(report.normalized_per_point_errors[j])!r},{seconds}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
