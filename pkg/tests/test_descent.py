import numpy as np
import pytest

from lsmds.descent import DescentOptions, minimize
from lsmds.errors import NumericalFailureError


def quadratic(x):
    return float(np.sum(x * x))


def quadratic_grad(x):
    return 2.0 * x


def test_options_validation():
    with pytest.raises(ValueError):
        DescentOptions(max_iters=0)
    with pytest.raises(ValueError):
        DescentOptions(tol=1.0)
    with pytest.raises(ValueError):
        DescentOptions(tol=-0.1)
    with pytest.raises(ValueError):
        DescentOptions(initial_step=0.0)
    with pytest.raises(ValueError):
        DescentOptions(init="other")


def test_minimize_quadratic():
    x, trace, iters = minimize(
        quadratic, quadratic_grad, np.array([3.0, -4.0]), DescentOptions(tol=0.0)
    )
    assert np.all(np.abs(x) < 1e-6)
    assert iters >= 1
    assert trace[0] == 25.0


def test_trace_never_increases():
    rng = np.random.default_rng(0)
    for _ in range(10):
        x0 = rng.normal(size=4) * 10
        _, trace, _ = minimize(
            quadratic, quadratic_grad, x0, DescentOptions(max_iters=50, tol=0.0)
        )
        assert np.all(np.diff(trace) <= 0)


def test_zero_objective_stops_immediately():
    x, trace, iters = minimize(
        quadratic, quadratic_grad, np.zeros(3), DescentOptions()
    )
    assert iters == 0
    assert trace == [0.0]
    np.testing.assert_array_equal(x, np.zeros(3))


def test_non_finite_objective_raises():
    with pytest.raises(NumericalFailureError):
        minimize(lambda x: float("nan"), quadratic_grad, np.ones(2), DescentOptions())


def test_non_finite_gradient_raises():
    with pytest.raises(NumericalFailureError):
        minimize(
            quadratic,
            lambda x: np.full_like(x, np.nan),
            np.ones(2),
            DescentOptions(),
        )


def test_tolerance_terminates_early():
    _, trace_loose, _ = minimize(
        quadratic, quadratic_grad, np.array([10.0]), DescentOptions(tol=0.5)
    )
    _, trace_tight, _ = minimize(
        quadratic, quadratic_grad, np.array([10.0]), DescentOptions(tol=1e-12)
    )
    assert len(trace_loose) <= len(trace_tight)
