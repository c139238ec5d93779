"""Dissimilarity measures for strings and real vectors, and dense matrices of them.

Strings are compared at the level of Unicode code points: every character
costs one unit, regardless of how many bytes it occupies. All functions here
are pure and operate on immutable inputs, so they are safe to call from any
number of threads.

Matrix files are CSV (one line per matrix row, no header) with a JSON sidecar
``<csv>.json`` describing ``{rows, cols, symmetric, metric}``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "ObjectSet",
    "DissimilarityMatrix",
    "STRING_METRICS",
    "VECTOR_METRICS",
    "levenshtein",
    "jaro",
    "qgram",
    "minkowski",
    "pairwise_matrix",
    "cross_matrix",
    "save_matrix",
    "load_matrix",
]

STRING_METRICS = ("levenshtein", "jaro", "qgram")
VECTOR_METRICS = ("euclidean", "minkowski")


@dataclass(frozen=True)
class ObjectSet:
    """An ordered, non-empty collection of objects of a single kind.

    For ``kind == "string"`` the items are a tuple of ``str``; for
    ``kind == "vector"`` they are the rows of a 2-D float array.
    """

    items: tuple | np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind == "string":
            items = tuple(self.items)
            if not items:
                raise ValueError("object set must contain at least one item")
            if not all(isinstance(s, str) for s in items):
                raise ValueError("string object set may only contain str items")
            object.__setattr__(self, "items", items)
        elif self.kind == "vector":
            arr = np.asarray(self.items, dtype=np.float64)
            if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
                raise ValueError("vector object set must be a non-empty 2-D array")
            if not np.all(np.isfinite(arr)):
                raise ValueError("vector items must be finite")
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, "items", arr)
        else:
            raise ValueError(f"unknown object kind: {self.kind!r}")

    @classmethod
    def from_strings(cls, strings) -> "ObjectSet":
        return cls(tuple(strings), "string")

    @classmethod
    def from_vectors(cls, vectors) -> "ObjectSet":
        return cls(np.asarray(vectors, dtype=np.float64), "vector")

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Dense matrix of pairwise dissimilarities.

    Entries are non-negative 64-bit floats in row-major order. A symmetric
    matrix must be square with an all-zero diagonal and exact mirror entries.
    ``metric`` records the tag the matrix was built with, when known.
    """

    values: np.ndarray
    symmetric: bool
    metric: str | None = None

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("dissimilarity matrix must be 2-D")
        if not np.all(np.isfinite(arr)):
            raise ValueError("dissimilarity entries must be finite")
        if np.any(arr < 0):
            raise ValueError("dissimilarity entries must be non-negative")
        if self.symmetric:
            if arr.shape[0] != arr.shape[1]:
                raise ValueError("symmetric matrix must be square")
            if not np.array_equal(arr, arr.T):
                raise ValueError("matrix marked symmetric has asymmetric entries")
            if np.any(np.diagonal(arr) != 0.0):
                raise ValueError("symmetric matrix must have a zero diagonal")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def levenshtein(s1: str, s2: str) -> int:
    """Minimum number of single-character insertions, deletions, and
    substitutions that turn ``s1`` into ``s2``.

    Characters are Unicode code points, so multi-byte characters cost 1
    like any other. Symmetric in its arguments; empty strings are valid.
    """
    if s1 == s2:
        return 0
    if not s1:
        return len(s2)
    if not s2:
        return len(s1)
    prev = list(range(len(s2) + 1))
    for i, c1 in enumerate(s1, 1):
        cur = [i]
        for j, c2 in enumerate(s2, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (c1 != c2)))
        prev = cur
    return prev[-1]


def jaro(s1: str, s2: str) -> float:
    """Jaro distance (1 minus the Jaro similarity), classic variant with no
    Winkler prefix boost. Returns a value in [0, 1]."""
    if s1 == s2:
        return 0.0
    len1, len2 = len(s1), len(s2)
    if len1 == 0 or len2 == 0:
        return 1.0
    window = max(max(len1, len2) // 2 - 1, 0)
    matched2 = [False] * len2
    matched1 = [False] * len1
    matches = 0
    for i, c in enumerate(s1):
        lo = max(0, i - window)
        hi = min(len2, i + window + 1)
        for j in range(lo, hi):
            if not matched2[j] and s2[j] == c:
                matched1[i] = matched2[j] = True
                matches += 1
                break
    if matches == 0:
        return 1.0
    transpositions = 0
    k = 0
    for i in range(len1):
        if matched1[i]:
            while not matched2[k]:
                k += 1
            if s1[i] != s2[k]:
                transpositions += 1
            k += 1
    transpositions //= 2
    sim = (
        matches / len1 + matches / len2 + (matches - transpositions) / matches
    ) / 3.0
    return 1.0 - sim


def qgram(s1: str, s2: str, q: int = 2) -> int:
    """q-gram profile distance: the L1 difference between the multisets of
    length-``q`` substrings.

    Distinct strings shorter than ``q`` share the empty profile, so this is
    a pseudo-metric (identity of indiscernibles can fail).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if s1 == s2:
        return 0
    p1 = Counter(s1[i : i + q] for i in range(len(s1) - q + 1))
    p2 = Counter(s2[i : i + q] for i in range(len(s2) - q + 1))
    return sum(abs(p1[g] - p2[g]) for g in p1.keys() | p2.keys())


def _minkowski_rows(rows: np.ndarray, y: np.ndarray, p: float) -> np.ndarray:
    # single arithmetic path shared by the scalar metric and the matrix
    # builders, so matrix entries equal the scalar function exactly
    return np.sum(np.abs(rows - y) ** p, axis=1) ** (1.0 / p)


def minkowski(x, y, p: float = 2.0) -> float:
    """Minkowski distance ``(sum |x_i - y_i|^p)^(1/p)`` for ``p >= 1``.

    ``p = 2`` is the Euclidean distance.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise ValueError(f"vectors have mismatched shapes {x.shape} and {y.shape}")
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return float(_minkowski_rows(x[np.newaxis, :], y, p)[0])


def _encode_strings(strings) -> tuple[np.ndarray, np.ndarray]:
    """Pack strings into a code-point matrix padded with -1, plus lengths."""
    lengths = np.array([len(s) for s in strings], dtype=np.int64)
    maxlen = int(lengths.max()) if len(strings) else 0
    padded = np.full((len(strings), maxlen), -1, dtype=np.int64)
    for k, s in enumerate(strings):
        if s:
            padded[k, : len(s)] = [ord(c) for c in s]
    return padded, lengths


def _levenshtein_row(
    codes: np.ndarray, padded: np.ndarray, lengths: np.ndarray
) -> np.ndarray:
    """Edit distance from one string (as code points) to many padded strings.

    Runs the classic dynamic program column by column, vectorized across the
    target strings; entry k is read off once column ``lengths[k]`` completes,
    so padding never affects the result.
    """
    m = codes.size
    n = lengths.size
    out = np.empty(n, dtype=np.int64)
    out[lengths == 0] = m
    if padded.shape[1] == 0:
        return out
    prev = np.tile(np.arange(m + 1, dtype=np.int64), (n, 1))
    cur = np.empty_like(prev)
    for j in range(1, padded.shape[1] + 1):
        cur[:, 0] = j
        cj = padded[:, j - 1]
        for i in range(1, m + 1):
            np.minimum(cur[:, i - 1] + 1, prev[:, i] + 1, out=cur[:, i])
            np.minimum(cur[:, i], prev[:, i - 1] + (cj != codes[i - 1]), out=cur[:, i])
        finished = lengths == j
        if finished.any():
            out[finished] = cur[finished, m]
        prev, cur = cur, prev
    return out


def _string_row(metric: str, s: str, others, codes=None, padded=None, lengths=None):
    if metric == "levenshtein":
        return _levenshtein_row(codes, padded, lengths).astype(np.float64)
    if metric == "jaro":
        return np.array([jaro(s, t) for t in others], dtype=np.float64)
    return np.array([qgram(s, t) for t in others], dtype=np.float64)


def _check_metric(metric: str, kind: str, p: float) -> None:
    if kind == "string":
        if metric not in STRING_METRICS:
            raise ValueError(f"metric {metric!r} does not apply to string objects")
    else:
        if metric not in VECTOR_METRICS:
            raise ValueError(f"metric {metric!r} does not apply to vector objects")
        if not p >= 1:
            raise ValueError(f"p must be >= 1, got {p}")


def pairwise_matrix(objs: ObjectSet, metric: str, p: float = 2.0) -> DissimilarityMatrix:
    """Symmetric matrix of ``metric`` between all item pairs of one set.

    Rows are evaluated independently, so the computation could be spread
    across threads; results are identical to sequential evaluation either way.
    """
    _check_metric(metric, objs.kind, p)
    n = len(objs)
    out = np.zeros((n, n), dtype=np.float64)
    if objs.kind == "string":
        padded, lengths = _encode_strings(objs.items)
        for i in range(n - 1):
            row = _string_row(
                metric,
                objs.items[i],
                objs.items[i + 1 :],
                codes=padded[i, : lengths[i]],
                padded=padded[i + 1 :],
                lengths=lengths[i + 1 :],
            )
            out[i, i + 1 :] = row
            out[i + 1 :, i] = row
    else:
        eff_p = 2.0 if metric == "euclidean" else p
        for i in range(n - 1):
            row = _minkowski_rows(objs.items[i + 1 :], objs.items[i], eff_p)
            out[i, i + 1 :] = row
            out[i + 1 :, i] = row
    return DissimilarityMatrix(out, symmetric=True, metric=metric)


def cross_matrix(
    rows: ObjectSet, cols: ObjectSet, metric: str, p: float = 2.0
) -> DissimilarityMatrix:
    """Rectangular matrix of ``metric`` between every row item and column item."""
    if rows.kind != cols.kind:
        raise ValueError(
            f"object sets have different kinds: {rows.kind!r} vs {cols.kind!r}"
        )
    _check_metric(metric, rows.kind, p)
    out = np.empty((len(rows), len(cols)), dtype=np.float64)
    if rows.kind == "string":
        padded, lengths = _encode_strings(cols.items)
        for i, s in enumerate(rows.items):
            codes = np.array([ord(c) for c in s], dtype=np.int64)
            out[i] = _string_row(
                metric, s, cols.items, codes=codes, padded=padded, lengths=lengths
            )
    else:
        eff_p = 2.0 if metric == "euclidean" else p
        for i in range(len(rows)):
            out[i] = _minkowski_rows(cols.items, rows.items[i], eff_p)
    return DissimilarityMatrix(out, symmetric=False, metric=metric)


def _sidecar_path(csv_path) -> Path:
    return Path(str(csv_path) + ".json")


def save_matrix(matrix: DissimilarityMatrix, csv_path) -> None:
    """Write the matrix as headerless CSV plus a ``<csv>.json`` sidecar."""
    csv_path = Path(csv_path)
    with csv_path.open("w", encoding="utf-8") as fh:
        np.savetxt(fh, matrix.values, fmt="%.17g", delimiter=",")
    descriptor = {
        "rows": int(matrix.shape[0]),
        "cols": int(matrix.shape[1]),
        "symmetric": bool(matrix.symmetric),
        "metric": matrix.metric,
    }
    _sidecar_path(csv_path).write_text(json.dumps(descriptor), encoding="utf-8")


def load_matrix(csv_path) -> DissimilarityMatrix:
    """Load a matrix written by :func:`save_matrix`, checking the sidecar shape."""
    csv_path = Path(csv_path)
    descriptor = json.loads(_sidecar_path(csv_path).read_text(encoding="utf-8"))
    values = np.loadtxt(csv_path, delimiter=",", ndmin=2, dtype=np.float64)
    expected = (descriptor["rows"], descriptor["cols"])
    if values.shape != expected:
        raise ValueError(
            f"matrix file shape {values.shape} does not match sidecar {expected}"
        )
    return DissimilarityMatrix(
        values, symmetric=descriptor["symmetric"], metric=descriptor.get("metric")
    )
