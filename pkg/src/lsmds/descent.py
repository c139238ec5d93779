"""Steepest descent with a backtracking line search.

One engine drives both the full configuration fit and the per-point
out-of-sample placement, so both inherit the same guarantees: the recorded
objective trace never increases, and non-finite values abort with
:class:`NumericalFailureError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericalFailureError

__all__ = ["DescentOptions", "minimize", "COINCIDENCE_EPS"]

STEP_GROWTH = 1.5
STEP_SHRINK = 0.5
MIN_STEP = 1e-20

# point pairs closer than this contribute zero gradient (removable 0/0)
COINCIDENCE_EPS = 1e-12


@dataclass(frozen=True)
class DescentOptions:
    """Iteration controls for the descent engine.

    ``tol`` is the relative objective-change threshold; ``init`` selects how
    the starting point is produced ("random_uniform" draws coordinates in
    [-1, 1] from ``seed``, "given" uses a caller-supplied start).
    """

    max_iters: int = 500
    tol: float = 1e-6
    initial_step: float = 1.0
    seed: int = 0
    init: str = "random_uniform"

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0.0 <= self.tol < 1.0:
            raise ValueError("tol must be in [0, 1)")
        if not self.initial_step > 0:
            raise ValueError("initial_step must be positive")
        if self.init not in ("random_uniform", "given"):
            raise ValueError(f"unknown init tag: {self.init!r}")


def minimize(
    value_fn: Callable[[np.ndarray], float],
    grad_fn: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    opts: DescentOptions,
) -> tuple[np.ndarray, list[float], int]:
    """Minimize ``value_fn`` from ``x0`` by steepest descent.

    Each iteration halves the step until the objective stops increasing and
    grows it by 1.5x after acceptance. Stops when the relative objective
    change drops below ``opts.tol``, the gradient vanishes, the step
    underflows, or ``opts.max_iters`` is reached.

    Returns ``(x, trace, iterations)`` where ``trace`` holds the objective
    value at the start and after every accepted iteration (non-increasing).
    """
    x = np.array(x0, dtype=np.float64)
    f = float(value_fn(x))
    if not np.isfinite(f):
        raise NumericalFailureError("objective is not finite at the starting point")
    trace = [f]
    step = opts.initial_step
    iterations = 0
    for _ in range(opts.max_iters):
        if f == 0.0:
            break
        g = grad_fn(x)
        if not np.all(np.isfinite(g)):
            raise NumericalFailureError("gradient is not finite")
        if not g.any():
            break
        while True:
            trial = x - step * g
            f_trial = float(value_fn(trial))
            if np.isfinite(f_trial) and f_trial <= f:
                break
            step *= STEP_SHRINK
            if step < MIN_STEP:
                return x, trace, iterations
        x = trial
        iterations += 1
        trace.append(f_trial)
        relative_drop = (f - f_trial) / f
        f = f_trial
        step *= STEP_GROWTH
        if relative_drop < opts.tol:
            break
    return x, trace, iterations
