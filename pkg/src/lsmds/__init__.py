"""Landmark least-squares multidimensional scaling with out-of-sample embedding.

Embed a reference set of objects by stress minimization over a dissimilarity
matrix, then map further objects into the fixed configuration either by
per-point stress optimization or through a trained feed-forward network,
with evaluation metrics and a reproducible benchmark pipeline on top.
"""

from .descent import DescentOptions
from .dissimilarity import (
    DissimilarityMatrix,
    ObjectSet,
    cross_matrix,
    jaro,
    levenshtein,
    load_matrix,
    minkowski,
    pairwise_matrix,
    qgram,
    save_matrix,
)
from .embedding import (
    Configuration,
    embed,
    load_configuration,
    normalized_stress,
    raw_stress,
    save_configuration,
    stress_gradient,
)
from .errors import (
    CorruptModelError,
    DegenerateInputError,
    ModelFormatError,
    ModelVersionError,
    NumericalFailureError,
)
from .evaluation import (
    OseReport,
    TimingStats,
    evaluate_embedding,
    normalized_point_error,
    point_error,
    time_op,
    total_error,
)
from .landmarks import LandmarkSet, farthest_point_sampling, random_landmarks
from .namegen import NameDataset, generate_names, load_names, save_names, split_reference_holdout
from .neural import (
    MlpModel,
    TrainOptions,
    TrainingSet,
    forward,
    init_model,
    load_model,
    loss_gradient,
    mae_loss,
    predict_point,
    save_model,
    train,
)
from .ose import PointQuery, embed_batch, embed_point, point_stress, point_stress_gradient
from .pipeline import PipelineConfig, load_config, run_benchmark

__version__ = "0.1.0"
