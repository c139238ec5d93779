"""Exception types shared across the package."""


class DegenerateInputError(ValueError):
    """Input is structurally valid but carries no usable signal,
    e.g. an all-zero dissimilarity matrix."""


class NumericalFailureError(RuntimeError):
    """An iterative computation produced non-finite values."""


class ModelFormatError(ValueError):
    """Base class for model (de)serialization problems."""


class ModelVersionError(ModelFormatError):
    """Persisted model declares an unsupported format version."""


class CorruptModelError(ModelFormatError):
    """Persisted model file is malformed or truncated."""
