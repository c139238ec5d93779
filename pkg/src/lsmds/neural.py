"""Feed-forward network that maps landmark dissimilarity profiles to coordinates.

The model is a fully connected multilayer perceptron: input width equals the
number of landmarks, output width equals the embedding dimension, and the
hidden layers (three by default, a decreasing funnel) use ReLU. Training
minimizes the mean per-sample Euclidean norm of the prediction error with
Adam updates; gradients come from exact backpropagation. A component-wise
absolute-error loss is available for comparison via ``loss_kind``.

Everything is deterministic for fixed seeds: initialization draws from a
seeded generator, the shuffle order is seeded, and trained models are
immutable, so they can be shared freely across threads.

Models persist as versioned JSON ``{version, layer_sizes, activation,
scaler, weights, biases}`` with weights in row-major nested lists; floats
survive the round trip exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CorruptModelError, ModelVersionError, NumericalFailureError

__all__ = [
    "MlpModel",
    "InputScaler",
    "TrainOptions",
    "TrainingSet",
    "default_hidden_sizes",
    "init_model",
    "forward",
    "predict_point",
    "predict_batch",
    "mae_loss",
    "componentwise_mae_loss",
    "loss_gradient",
    "train",
    "with_input_scaler",
    "save_model",
    "load_model",
]

MODEL_FORMAT_VERSION = 1
LOSS_KINDS = ("euclidean", "componentwise")


@dataclass(frozen=True)
class InputScaler:
    """Optional per-feature min-max rescaling recorded with a model.

    Features are mapped to ``(x - mins) / ranges``; constant features get
    range 1 so they land at zero.
    """

    mins: np.ndarray
    ranges: np.ndarray

    def __post_init__(self):
        mins = np.asarray(self.mins, dtype=np.float64)
        ranges = np.asarray(self.ranges, dtype=np.float64)
        if mins.ndim != 1 or mins.shape != ranges.shape:
            raise ValueError("scaler mins and ranges must be matching 1-D vectors")
        if np.any(ranges <= 0):
            raise ValueError("scaler ranges must be positive")
        mins = mins.copy()
        mins.flags.writeable = False
        ranges = ranges.copy()
        ranges.flags.writeable = False
        object.__setattr__(self, "mins", mins)
        object.__setattr__(self, "ranges", ranges)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (x - self.mins) / self.ranges


@dataclass(frozen=True)
class MlpModel:
    """Immutable network parameters.

    ``weights[k]`` has shape ``(layer_sizes[k+1], layer_sizes[k])`` (out x in)
    and ``biases[k]`` has shape ``(layer_sizes[k+1],)``. Hidden layers apply
    ReLU; the output layer is affine.
    """

    layer_sizes: tuple[int, ...]
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    scaler: InputScaler | None = None
    activation: str = "relu"
    version: int = MODEL_FORMAT_VERSION

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        if len(sizes) < 2 or any(s < 1 for s in sizes):
            raise ValueError("layer sizes must be >= 1 with at least input and output")
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise ValueError("one weight matrix and bias vector per layer required")
        weights = []
        biases = []
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            w = np.asarray(w, dtype=np.float64)
            b = np.asarray(b, dtype=np.float64)
            if w.shape != (sizes[k + 1], sizes[k]) or b.shape != (sizes[k + 1],):
                raise ValueError(f"layer {k} parameter shapes are inconsistent")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValueError(f"layer {k} parameters must be finite")
            w = w.copy()
            w.flags.writeable = False
            b = b.copy()
            b.flags.writeable = False
            weights.append(w)
            biases.append(b)
        if self.scaler is not None and self.scaler.mins.shape[0] != sizes[0]:
            raise ValueError("scaler width does not match the input layer")
        if self.activation != "relu":
            raise ValueError(f"unsupported activation: {self.activation!r}")
        object.__setattr__(self, "layer_sizes", sizes)
        object.__setattr__(self, "weights", tuple(weights))
        object.__setattr__(self, "biases", tuple(biases))

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_size(self) -> int:
        return self.layer_sizes[-1]


@dataclass(frozen=True)
class TrainOptions:
    epochs: int = 200
    batch_size: int = 32
    learning_rate: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if not (0.0 < self.adam_beta1 < 1.0 and 0.0 < self.adam_beta2 < 1.0):
            raise ValueError("adam betas must lie in (0, 1)")
        if not self.adam_epsilon > 0:
            raise ValueError("adam epsilon must be positive")


@dataclass(frozen=True)
class TrainingSet:
    """Paired landmark-dissimilarity rows (M x L) and coordinate labels (M x K)."""

    inputs: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.float64)
        if inputs.ndim != 2 or labels.ndim != 2:
            raise ValueError("inputs and labels must be 2-D matrices")
        if inputs.shape[0] != labels.shape[0]:
            raise ValueError("inputs and labels must have matching row counts")
        if inputs.shape[0] < 1:
            raise ValueError("training set must contain at least one sample")
        if not (np.all(np.isfinite(inputs)) and np.all(np.isfinite(labels))):
            raise ValueError("training data must be finite")
        inputs = inputs.copy()
        inputs.flags.writeable = False
        labels = labels.copy()
        labels.flags.writeable = False
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.inputs.shape[0]


def default_hidden_sizes(input_size: int) -> tuple[int, int, int]:
    """Decreasing three-layer funnel used when no hidden sizes are given."""
    return (min(input_size, 128), 64, 32)


def init_model(
    input_size: int,
    output_size: int,
    hidden=None,
    seed: int = 0,
) -> MlpModel:
    """Fresh model with fan-in-scaled symmetric-uniform weights, zero biases.

    Deterministic per ``seed``; distinct seeds give distinct weights.
    """
    hidden = default_hidden_sizes(input_size) if hidden is None else tuple(hidden)
    sizes = (int(input_size), *(int(h) for h in hidden), int(output_size))
    if any(s < 1 for s in sizes):
        raise ValueError(f"every layer needs at least one unit, got {sizes}")
    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MlpModel(sizes, tuple(weights), tuple(biases))


def _forward_layers(weights, biases, x: np.ndarray) -> np.ndarray:
    a = x
    for w, b in zip(weights[:-1], biases[:-1]):
        a = np.maximum(a @ w.T + b, 0.0)
    return a @ weights[-1].T + biases[-1]


def forward(model: MlpModel, x) -> np.ndarray:
    """One forward pass for a single L-vector; returns the K-vector output."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.input_size,):
        raise ValueError(f"input must have shape ({model.input_size},), got {x.shape}")
    if model.scaler is not None:
        x = model.scaler.apply(x)
    return _forward_layers(model.weights, model.biases, x[np.newaxis, :])[0]


def predict_point(model: MlpModel, deltas) -> np.ndarray:
    """Map one new object from its L landmark dissimilarities to coordinates.

    Alias of :func:`forward`: a single pass that reads exactly L inputs.
    """
    return forward(model, deltas)


def predict_batch(model: MlpModel, inputs) -> np.ndarray:
    """Forward pass over M rows at once; row i equals ``forward(model, inputs[i])``."""
    x = np.asarray(inputs, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.input_size:
        raise ValueError(f"inputs must be 2-D with {model.input_size} columns")
    if model.scaler is not None:
        x = model.scaler.apply(x)
    return _forward_layers(model.weights, model.biases, x)


def mae_loss(pred: np.ndarray, labels: np.ndarray) -> float:
    """Mean over samples of the Euclidean norm of the row-wise error."""
    pred = np.asarray(pred, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if pred.shape != labels.shape or pred.ndim != 2:
        raise ValueError("predictions and labels must be matching 2-D matrices")
    if pred.shape[0] < 1:
        raise ValueError("loss needs at least one sample")
    return float(np.mean(np.linalg.norm(pred - labels, axis=1)))


def componentwise_mae_loss(pred: np.ndarray, labels: np.ndarray) -> float:
    """Plain mean absolute error over every output component, for comparison."""
    pred = np.asarray(pred, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if pred.shape != labels.shape or pred.ndim != 2:
        raise ValueError("predictions and labels must be matching 2-D matrices")
    if pred.shape[0] < 1:
        raise ValueError("loss needs at least one sample")
    return float(np.mean(np.abs(pred - labels)))


def _loss_value(pred: np.ndarray, labels: np.ndarray, loss_kind: str) -> float:
    if loss_kind == "euclidean":
        return float(np.mean(np.linalg.norm(pred - labels, axis=1)))
    return float(np.mean(np.abs(pred - labels)))


def _backprop(weights, biases, x: np.ndarray, labels: np.ndarray, loss_kind: str):
    """Exact parameter gradients of the loss over one batch of rows."""
    activations = [x]
    preacts = []
    a = x
    for w, b in zip(weights[:-1], biases[:-1]):
        z = a @ w.T + b
        preacts.append(z)
        a = np.maximum(z, 0.0)
        activations.append(a)
    pred = a @ weights[-1].T + biases[-1]

    m = x.shape[0]
    diff = pred - labels
    if loss_kind == "euclidean":
        norms = np.linalg.norm(diff, axis=1)
        # zero-error rows contribute a zero subgradient
        safe = norms > 0.0
        delta = np.zeros_like(diff)
        delta[safe] = diff[safe] / norms[safe, np.newaxis]
        delta /= m
    else:
        delta = np.sign(diff) / diff.size

    grads_w = [None] * len(weights)
    grads_b = [None] * len(biases)
    for k in range(len(weights) - 1, -1, -1):
        grads_w[k] = delta.T @ activations[k]
        grads_b[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ weights[k]) * (preacts[k - 1] > 0.0)
    return grads_w, grads_b


def loss_gradient(model: MlpModel, batch: TrainingSet, loss_kind: str = "euclidean"):
    """Gradients of the training loss with respect to every weight and bias.

    Returns ``(weight_grads, bias_grads)`` shaped exactly like the model
    parameters.
    """
    if loss_kind not in LOSS_KINDS:
        raise ValueError(f"unknown loss kind: {loss_kind!r}")
    if batch.inputs.shape[1] != model.input_size:
        raise ValueError("batch input width does not match the model")
    if batch.labels.shape[1] != model.output_size:
        raise ValueError("batch label width does not match the model")
    x = batch.inputs
    if model.scaler is not None:
        x = model.scaler.apply(x)
    gw, gb = _backprop(list(model.weights), list(model.biases), x, batch.labels, loss_kind)
    return tuple(gw), tuple(gb)


def train(
    model: MlpModel,
    data: TrainingSet,
    opts: TrainOptions | None = None,
    loss_kind: str = "euclidean",
) -> tuple[MlpModel, np.ndarray]:
    """Adam-train a copy of ``model`` on ``data``.

    Updates use bias-corrected first and second moments; the shuffle order is
    drawn from ``opts.seed`` so a fixed seed reproduces the final parameters
    exactly. Returns the trained model and a loss trace of length
    ``epochs + 1`` whose first entry is the pre-training loss over the full
    set and subsequent entries follow each epoch.
    """
    opts = opts or TrainOptions()
    if loss_kind not in LOSS_KINDS:
        raise ValueError(f"unknown loss kind: {loss_kind!r}")
    if data.inputs.shape[1] != model.input_size:
        raise ValueError("training input width does not match the model")
    if data.labels.shape[1] != model.output_size:
        raise ValueError("training label width does not match the model")

    x = data.inputs
    if model.scaler is not None:
        x = model.scaler.apply(x)
    labels = data.labels
    weights = [w.copy() for w in model.weights]
    biases = [b.copy() for b in model.biases]
    m_w = [np.zeros_like(w) for w in weights]
    v_w = [np.zeros_like(w) for w in weights]
    m_b = [np.zeros_like(b) for b in biases]
    v_b = [np.zeros_like(b) for b in biases]

    rng = np.random.default_rng(opts.seed)
    n = x.shape[0]
    lr = opts.learning_rate
    b1, b2, eps = opts.adam_beta1, opts.adam_beta2, opts.adam_epsilon
    trace = [_loss_value(_forward_layers(weights, biases, x), labels, loss_kind)]
    step = 0
    for epoch in range(opts.epochs):
        order = rng.permutation(n) if opts.shuffle else np.arange(n)
        for start in range(0, n, opts.batch_size):
            idx = order[start : start + opts.batch_size]
            gw, gb = _backprop(weights, biases, x[idx], labels[idx], loss_kind)
            step += 1
            c1 = 1.0 - b1**step
            c2 = 1.0 - b2**step
            for params, grads, ms, vs in (
                (weights, gw, m_w, v_w),
                (biases, gb, m_b, v_b),
            ):
                for k, g in enumerate(grads):
                    ms[k] = b1 * ms[k] + (1.0 - b1) * g
                    vs[k] = b2 * vs[k] + (1.0 - b2) * g * g
                    params[k] -= lr * (ms[k] / c1) / (np.sqrt(vs[k] / c2) + eps)
        loss = _loss_value(_forward_layers(weights, biases, x), labels, loss_kind)
        if not np.isfinite(loss):
            raise NumericalFailureError(f"non-finite loss after epoch {epoch + 1}")
        trace.append(loss)
    trained = MlpModel(
        model.layer_sizes, tuple(weights), tuple(biases), scaler=model.scaler
    )
    return trained, np.asarray(trace)


def with_input_scaler(model: MlpModel, inputs) -> MlpModel:
    """Return the model with a min-max scaler fitted to ``inputs`` attached."""
    x = np.asarray(inputs, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.input_size:
        raise ValueError(f"inputs must be 2-D with {model.input_size} columns")
    mins = x.min(axis=0)
    ranges = x.max(axis=0) - mins
    ranges[ranges == 0.0] = 1.0
    return MlpModel(
        model.layer_sizes, model.weights, model.biases, scaler=InputScaler(mins, ranges)
    )


def save_model(model: MlpModel, path) -> None:
    doc = {
        "version": model.version,
        "layer_sizes": list(model.layer_sizes),
        "activation": model.activation,
        "scaler": None
        if model.scaler is None
        else {
            "mins": [float(v) for v in model.scaler.mins],
            "ranges": [float(v) for v in model.scaler.ranges],
        },
        "weights": [[[float(v) for v in row] for row in w] for w in model.weights],
        "biases": [[float(v) for v in b] for b in model.biases],
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_model(path) -> MlpModel:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptModelError(f"model file is not valid JSON: {path}") from exc
    if not isinstance(doc, dict):
        raise CorruptModelError(f"model file has no top-level object: {path}")
    version = doc.get("version")
    if version != MODEL_FORMAT_VERSION:
        raise ModelVersionError(
            f"unsupported model version {version!r} (expected {MODEL_FORMAT_VERSION})"
        )
    try:
        scaler_doc = doc["scaler"]
        scaler = (
            None
            if scaler_doc is None
            else InputScaler(
                np.asarray(scaler_doc["mins"], dtype=np.float64),
                np.asarray(scaler_doc["ranges"], dtype=np.float64),
            )
        )
        model = MlpModel(
            tuple(doc["layer_sizes"]),
            tuple(np.asarray(w, dtype=np.float64) for w in doc["weights"]),
            tuple(np.asarray(b, dtype=np.float64) for b in doc["biases"]),
            scaler=scaler,
            activation=doc["activation"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModelError(f"model file is malformed: {path} ({exc})") from exc
    return model
