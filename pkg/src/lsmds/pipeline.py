"""End-to-end benchmark pipeline: names -> distances -> embedding -> landmarks
-> out-of-sample runs -> evaluation -> plot-ready CSV.

Every stage persists its artifact under one output directory and can be
re-run independently; prerequisites are computed on demand when missing.
Because all randomness is seeded through :class:`PipelineConfig`, a rerun
under the same config reproduces every artifact byte for byte (timing
columns aside).

Config files are JSON; see :data:`CONFIG_SCHEMA` for the accepted keys and
defaults. The ``LSMDS_OUT_DIR`` environment variable overrides the output
directory (and nothing else).
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import dissimilarity, embedding, evaluation, landmarks, namegen, neural, ose
from .descent import DescentOptions
from .errors import NumericalFailureError
from .neural import TrainOptions

__all__ = [
    "PipelineConfig",
    "CONFIG_SCHEMA",
    "OUTPUT_DIR_ENV",
    "load_config",
    "run_generate",
    "run_distmatrix",
    "run_embed",
    "run_landmarks",
    "run_ose",
    "run_benchmark",
    "run_evaluate",
    "BENCHMARK_COLUMNS",
]

OUTPUT_DIR_ENV = "LSMDS_OUT_DIR"

METHOD_CHOICES = ("optimize", "neural")

# key: (expected type description, default)
CONFIG_SCHEMA = {
    "output_dir": "directory for all artifacts (default 'lsmds_out')",
    "n_reference": "reference names embedded up front (default 1000)",
    "n_holdout": "out-of-sample names (default 100)",
    "dimension": "embedding dimension K (default 7)",
    "landmark_grid": "list of landmark counts (default [25, 50, 100, 200, 400])",
    "landmark_method": "'fps' or 'random' (default 'fps')",
    "methods": "'optimize', 'neural', 'both', or a list (default 'both')",
    "seeds": "object with integer 'data', 'lsmds', 'landmarks', 'nn'",
    "embed_descent": "object: max_iters, tol, initial_step for the reference fit",
    "point_descent": "object: max_iters, tol, initial_step for per-point placement",
    "train": "object: epochs, batch_size, learning_rate, adam_beta1, adam_beta2, "
    "adam_epsilon, shuffle",
    "hidden_sizes": "list of hidden layer widths, or null for the default funnel",
}

BENCHMARK_COLUMNS = [
    "method",
    "n_landmarks",
    "dimension",
    "n_reference",
    "n_holdout",
    "landmarks_file",
    "status",
    "total_error",
    "mean_point_error",
    "mean_normalized_point_error",
    "mean_rt_seconds",
    "min_rt_seconds",
    "max_rt_seconds",
    "train_seconds",
]


@dataclass(frozen=True)
class PipelineConfig:
    output_dir: Path = Path("lsmds_out")
    n_reference: int = 1000
    n_holdout: int = 100
    dimension: int = 7
    landmark_grid: tuple[int, ...] = (25, 50, 100, 200, 400)
    landmark_method: str = "fps"
    methods: tuple[str, ...] = METHOD_CHOICES
    seed_data: int = 101
    seed_lsmds: int = 202
    seed_landmarks: int = 303
    seed_nn: int = 404
    embed_descent: DescentOptions = field(default_factory=DescentOptions)
    point_descent: DescentOptions = field(
        default_factory=lambda: DescentOptions(max_iters=200, tol=1e-8, init="given")
    )
    train: TrainOptions = field(default_factory=TrainOptions)
    hidden_sizes: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if self.n_reference < 1 or self.n_holdout < 0:
            raise ValueError("need n_reference >= 1 and n_holdout >= 0")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        grid = tuple(int(v) for v in self.landmark_grid)
        if not grid:
            raise ValueError("landmark grid must not be empty")
        if any(not 1 <= v <= self.n_reference for v in grid):
            raise ValueError(
                f"landmark counts must lie in [1, {self.n_reference}], got {grid}"
            )
        object.__setattr__(self, "landmark_grid", grid)
        if self.landmark_method not in ("fps", "random"):
            raise ValueError(f"unknown landmark method: {self.landmark_method!r}")
        methods = tuple(self.methods)
        if not methods or any(m not in METHOD_CHOICES for m in methods):
            raise ValueError(f"methods must be drawn from {METHOD_CHOICES}")
        object.__setattr__(self, "methods", methods)
        # seeds drive the stage randomness; option seeds are overwritten here
        object.__setattr__(
            self, "embed_descent", replace(self.embed_descent, seed=self.seed_lsmds)
        )
        object.__setattr__(self, "train", replace(self.train, seed=self.seed_nn))
        if self.hidden_sizes is not None:
            object.__setattr__(
                self, "hidden_sizes", tuple(int(h) for h in self.hidden_sizes)
            )

    # artifact paths -------------------------------------------------------
    def path(self, name: str) -> Path:
        return self.output_dir / name

    @property
    def names_path(self) -> Path:
        return self.path("names.txt")

    @property
    def reference_names_path(self) -> Path:
        return self.path("reference_names.txt")

    @property
    def holdout_names_path(self) -> Path:
        return self.path("holdout_names.txt")

    @property
    def reference_delta_path(self) -> Path:
        return self.path("reference_delta.csv")

    @property
    def cross_delta_path(self) -> Path:
        return self.path("holdout_cross_delta.csv")

    @property
    def reference_config_path(self) -> Path:
        return self.path("reference_config.csv")

    @property
    def stress_trace_path(self) -> Path:
        return self.path("stress_trace.csv")

    def landmarks_path(self, count: int) -> Path:
        return self.path(f"landmarks_L{count}.json")

    def model_path(self, count: int) -> Path:
        return self.path(f"model_L{count}.json")

    def coords_path(self, method: str, count: int) -> Path:
        return self.path(f"coords_{method}_L{count}.csv")

    def report_path(self, method: str, count: int) -> Path:
        return self.path(f"report_{method}_L{count}.json")

    def report_csv_path(self, method: str, count: int) -> Path:
        return self.path(f"report_{method}_L{count}.csv")

    @property
    def benchmark_path(self) -> Path:
        return self.path("benchmark.csv")


def _parse_methods(raw) -> tuple[str, ...]:
    if isinstance(raw, str):
        if raw == "both":
            return METHOD_CHOICES
        return (raw,)
    return tuple(raw)


def load_config(path=None, **overrides) -> PipelineConfig:
    """Build a config from an optional JSON file plus keyword overrides.

    Unknown keys are rejected so typos fail loudly. ``LSMDS_OUT_DIR`` in the
    environment takes precedence over both the file and the overrides.
    """
    doc = {}
    if path is not None:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise ValueError(f"config file must hold a JSON object: {path}")
    doc.update({k: v for k, v in overrides.items() if v is not None})
    unknown = set(doc) - set(CONFIG_SCHEMA)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")

    kwargs = {}
    for key in ("output_dir", "n_reference", "n_holdout", "dimension",
                "landmark_method", "hidden_sizes"):
        if key in doc:
            kwargs[key] = doc[key]
    if "landmark_grid" in doc:
        kwargs["landmark_grid"] = tuple(doc["landmark_grid"])
    if "methods" in doc:
        kwargs["methods"] = _parse_methods(doc["methods"])
    seeds = doc.get("seeds", {})
    for name in ("data", "lsmds", "landmarks", "nn"):
        if name in seeds:
            kwargs[f"seed_{name}"] = int(seeds[name])
    if "embed_descent" in doc:
        kwargs["embed_descent"] = DescentOptions(**doc["embed_descent"])
    if "point_descent" in doc:
        kwargs["point_descent"] = DescentOptions(init="given", **doc["point_descent"])
    if "train" in doc:
        kwargs["train"] = TrainOptions(**doc["train"])
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        kwargs["output_dir"] = env_dir
    return PipelineConfig(**kwargs)


# stage: generate ----------------------------------------------------------


def run_generate(cfg: PipelineConfig) -> int:
    """Generate the name dataset and its reference/holdout split."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    total = cfg.n_reference + cfg.n_holdout
    dataset = namegen.generate_names(total, cfg.seed_data)
    reference, holdout = namegen.split_reference_holdout(
        dataset, cfg.n_reference, cfg.n_holdout, cfg.seed_data
    )
    namegen.save_names(dataset.names, cfg.names_path)
    namegen.save_names(reference, cfg.reference_names_path)
    namegen.save_names(holdout, cfg.holdout_names_path)
    return total


def _ensure_names(cfg: PipelineConfig) -> tuple[list[str], list[str]]:
    if not (cfg.reference_names_path.exists() and cfg.holdout_names_path.exists()):
        run_generate(cfg)
    return (
        namegen.load_names(cfg.reference_names_path),
        namegen.load_names(cfg.holdout_names_path),
    )


# stage: dissimilarity matrices ---------------------------------------------


def run_distmatrix(cfg: PipelineConfig) -> dissimilarity.DissimilarityMatrix:
    """Pairwise edit distances between all reference names."""
    reference, _ = _ensure_names(cfg)
    matrix = dissimilarity.pairwise_matrix(
        dissimilarity.ObjectSet.from_strings(reference), "levenshtein"
    )
    dissimilarity.save_matrix(matrix, cfg.reference_delta_path)
    return matrix


def _ensure_reference_delta(cfg: PipelineConfig) -> dissimilarity.DissimilarityMatrix:
    if cfg.reference_delta_path.exists():
        return dissimilarity.load_matrix(cfg.reference_delta_path)
    return run_distmatrix(cfg)


def _ensure_cross_delta(cfg: PipelineConfig) -> dissimilarity.DissimilarityMatrix:
    """Edit distances reference x holdout (rows follow the reference)."""
    if cfg.cross_delta_path.exists():
        return dissimilarity.load_matrix(cfg.cross_delta_path)
    reference, holdout = _ensure_names(cfg)
    matrix = dissimilarity.cross_matrix(
        dissimilarity.ObjectSet.from_strings(reference),
        dissimilarity.ObjectSet.from_strings(holdout),
        "levenshtein",
    )
    dissimilarity.save_matrix(matrix, cfg.cross_delta_path)
    return matrix


# stage: reference embedding -------------------------------------------------


def run_embed(cfg: PipelineConfig) -> tuple[embedding.Configuration, np.ndarray]:
    """Fit the reference configuration and persist it with its stress trace."""
    delta = _ensure_reference_delta(cfg)
    config, trace = embedding.embed(delta, cfg.dimension, cfg.embed_descent)
    embedding.save_configuration(config, cfg.reference_config_path)
    embedding.save_stress_trace(trace, cfg.stress_trace_path)
    return config, trace


def _ensure_configuration(cfg: PipelineConfig) -> embedding.Configuration:
    if cfg.reference_config_path.exists():
        return embedding.load_configuration(cfg.reference_config_path)
    return run_embed(cfg)[0]


# stage: landmarks ------------------------------------------------------------


def _select_landmarks(cfg: PipelineConfig, count: int) -> landmarks.LandmarkSet:
    if cfg.landmark_method == "fps":
        delta = _ensure_reference_delta(cfg)
        return landmarks.farthest_point_sampling(delta, count, cfg.seed_landmarks)
    return landmarks.random_landmarks(cfg.n_reference, count, cfg.seed_landmarks)


def run_landmarks(cfg: PipelineConfig) -> dict[int, landmarks.LandmarkSet]:
    """Select and persist one landmark set per grid entry."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    selected = {}
    for count in cfg.landmark_grid:
        chosen = _select_landmarks(cfg, count)
        landmarks.save_landmarks(chosen, cfg.landmarks_path(count))
        selected[count] = chosen
    return selected


def _ensure_landmarks(cfg: PipelineConfig, count: int) -> landmarks.LandmarkSet:
    path = cfg.landmarks_path(count)
    if path.exists():
        return landmarks.load_landmarks(path)
    chosen = _select_landmarks(cfg, count)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    landmarks.save_landmarks(chosen, path)
    return chosen


# stage: out-of-sample runs ----------------------------------------------------


def _ose_single(cfg: PipelineConfig, method: str, count: int):
    """Run one (method, landmark count) cell; returns (report, train_seconds)."""
    if not 1 <= count <= cfg.n_reference:
        raise ValueError(
            f"landmark count must lie in [1, {cfg.n_reference}], got {count}"
        )
    if cfg.n_holdout < 1:
        raise ValueError("out-of-sample stages need n_holdout >= 1")
    if not cfg.reference_config_path.exists():
        raise FileNotFoundError(
            f"reference configuration missing: {cfg.reference_config_path} "
            "(run the embed stage first)"
        )
    reference = embedding.load_configuration(cfg.reference_config_path)
    chosen = _ensure_landmarks(cfg, count)
    cross = _ensure_cross_delta(cfg)
    idx = np.asarray(chosen.indices, dtype=np.intp)
    landmark_coords = reference.coords[idx]
    # per-holdout-point landmark dissimilarities, rows follow the holdout
    holdout_deltas = cross.values[idx, :].T.copy()
    m = holdout_deltas.shape[0]

    train_seconds = None
    seconds = np.empty(m)
    coords = np.empty((m, cfg.dimension))
    if method == "optimize":
        queries = [ose.PointQuery(holdout_deltas[j], landmark_coords) for j in range(m)]
        if m:
            ose.embed_point(queries[0], cfg.point_descent)  # warm-up, discarded
        for j, query in enumerate(queries):
            t0 = time.perf_counter()
            coords[j], _ = ose.embed_point(query, cfg.point_descent)
            seconds[j] = time.perf_counter() - t0
    elif method == "neural":
        delta = _ensure_reference_delta(cfg)
        training = neural.TrainingSet(delta.values[:, idx], reference.coords)
        model = neural.init_model(
            count, cfg.dimension, hidden=cfg.hidden_sizes, seed=cfg.seed_nn
        )
        t0 = time.perf_counter()
        model, _ = neural.train(model, training, cfg.train)
        train_seconds = time.perf_counter() - t0
        neural.save_model(model, cfg.model_path(count))
        if m:
            neural.predict_point(model, holdout_deltas[0])  # warm-up, discarded
        for j in range(m):
            t0 = time.perf_counter()
            coords[j] = neural.predict_point(model, holdout_deltas[j])
            seconds[j] = time.perf_counter() - t0
    else:
        raise ValueError(f"unknown method: {method!r}")

    embedding.save_configuration(
        embedding.Configuration(coords), cfg.coords_path(method, count)
    )
    report = evaluation.evaluate_embedding(
        method, reference, coords, cross.values, count, per_point_seconds=seconds
    )
    evaluation.save_report(report, cfg.report_path(method, count))
    evaluation.save_report_csv(report, cfg.report_csv_path(method, count))
    return report, train_seconds


def run_ose(cfg: PipelineConfig, method: str, count: int | None = None):
    """Run the chosen method for one landmark count (or the whole grid)."""
    if method not in METHOD_CHOICES:
        raise ValueError(f"unknown method: {method!r}")
    counts = cfg.landmark_grid if count is None else (int(count),)
    return [_ose_single(cfg, method, c)[0] for c in counts]


# stage: benchmark ---------------------------------------------------------------


def _format_float(value) -> str:
    return "" if value is None else repr(float(value))


def run_benchmark(cfg: PipelineConfig) -> Path:
    """Run every (landmark count, method) cell and write the long-form CSV.

    Prerequisite stages run on demand. A failing cell is flagged in its
    ``status`` column and the sweep continues.
    """
    _ensure_names(cfg)
    _ensure_reference_delta(cfg)
    _ensure_configuration(cfg)
    _ensure_cross_delta(cfg)
    lines = [",".join(BENCHMARK_COLUMNS)]
    for count in cfg.landmark_grid:
        _ensure_landmarks(cfg, count)  # shared by both methods
        for method in cfg.methods:
            base = [
                method,
                str(count),
                str(cfg.dimension),
                str(cfg.n_reference),
                str(cfg.n_holdout),
                cfg.landmarks_path(count).name,
            ]
            try:
                report, train_seconds = _ose_single(cfg, method, count)
            except (NumericalFailureError, FloatingPointError) as exc:
                lines.append(",".join(base + [f"error: {exc}"] + [""] * 7))
                continue
            timing = report.timing
            lines.append(
                ",".join(
                    base
                    + [
                        "ok",
                        _format_float(report.total_error),
                        _format_float(report.per_point_errors.mean()),
                        _format_float(report.normalized_per_point_errors.mean()),
                        _format_float(timing.mean),
                        _format_float(timing.min),
                        _format_float(timing.max),
                        _format_float(train_seconds),
                    ]
                )
            )
    cfg.benchmark_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return cfg.benchmark_path


# stage: evaluate (from persisted artifacts) ------------------------------------


def run_evaluate(cfg: PipelineConfig, method: str, count: int | None = None):
    """Recompute reports from persisted coordinates (no timing information)."""
    if method not in METHOD_CHOICES:
        raise ValueError(f"unknown method: {method!r}")
    reference = embedding.load_configuration(cfg.reference_config_path)
    cross = _ensure_cross_delta(cfg)
    counts = cfg.landmark_grid if count is None else (int(count),)
    reports = []
    for c in counts:
        coords_path = cfg.coords_path(method, c)
        if not coords_path.exists():
            raise FileNotFoundError(
                f"coordinates missing: {coords_path} (run the ose stage first)"
            )
        coords = embedding.load_configuration(coords_path).coords
        report = evaluation.evaluate_embedding(
            method, reference, coords, cross.values, c
        )
        evaluation.save_report(report, cfg.report_path(method, c))
        evaluation.save_report_csv(report, cfg.report_csv_path(method, c))
        reports.append(report)
    return reports
