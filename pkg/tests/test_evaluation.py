import time

import numpy as np
import pytest
from conftest import relative_error

from lsmds.embedding import Configuration
from lsmds.errors import DegenerateInputError
from lsmds.evaluation import (
    OseReport,
    evaluate_embedding,
    load_report,
    normalized_point_error,
    point_error,
    save_report,
    save_report_csv,
    skipped_term_count,
    time_op,
    total_error,
)


def test_point_error_exact_fit():
    rng = np.random.default_rng(0)
    coords = rng.normal(size=(6, 2))
    y = rng.normal(size=2)
    deltas = np.linalg.norm(coords - y, axis=1)
    assert point_error(Configuration(coords), y, deltas) == pytest.approx(0.0, abs=1e-25)


def test_point_error_single_reference():
    ref = Configuration(np.zeros((1, 2)))
    assert point_error(ref, np.array([1.0, 0.0]), np.array([2.0])) == pytest.approx(1.0)


def test_point_error_matches_term_oracle():
    rng = np.random.default_rng(1)
    coords = rng.normal(size=(9, 3))
    y = rng.normal(size=3)
    deltas = rng.uniform(0.1, 4.0, 9)
    expected = 0.0
    for i in range(9):
        d = float(np.linalg.norm(coords[i] - y))
        expected += (deltas[i] - d) ** 2
    got = point_error(Configuration(coords), y, deltas)
    assert relative_error(got, expected).max() <= 1e-12


def test_point_error_shape_checks():
    ref = Configuration(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        point_error(ref, np.zeros(3), np.ones(3))
    with pytest.raises(ValueError):
        point_error(ref, np.zeros(2), np.ones(4))


def test_normalized_point_error():
    assert normalized_point_error(0.0, np.array([1.0, 1.0])) == 0.0
    assert normalized_point_error(1.0, np.array([1.0, 3.0])) == pytest.approx(0.25)
    with pytest.raises(DegenerateInputError):
        normalized_point_error(1.0, np.zeros(3))


def test_normalized_point_error_scaling():
    rng = np.random.default_rng(2)
    coords = rng.normal(size=(5, 2))
    y = rng.normal(size=2)
    deltas = rng.uniform(0.5, 2.0, 5)
    ref = Configuration(coords)
    base = normalized_point_error(point_error(ref, y, deltas), deltas)
    c = 3.0
    scaled_ref = Configuration(coords * c)
    scaled = normalized_point_error(
        point_error(scaled_ref, y * c, deltas * c), deltas * c
    )
    # perr scales by c^2 and the denominator by c, so the ratio scales by c
    assert scaled == pytest.approx(base * c, rel=1e-12)


def test_total_error_exact_fit():
    rng = np.random.default_rng(3)
    coords = rng.normal(size=(5, 2))
    points = rng.normal(size=(3, 2))
    cross = np.linalg.norm(coords[:, None, :] - points[None, :, :], axis=2)
    assert total_error(Configuration(coords), points, cross) == pytest.approx(
        0.0, abs=1e-25
    )


def test_total_error_single_term():
    ref = Configuration(np.zeros((1, 2)))
    y = np.array([[2.0, 0.0]])
    cross = np.array([[4.0]])
    assert total_error(ref, y, cross) == pytest.approx(1.0)


def test_total_error_matches_double_loop_oracle():
    rng = np.random.default_rng(4)
    coords = rng.normal(size=(7, 3))
    points = rng.normal(size=(4, 3))
    cross = rng.uniform(0.2, 3.0, (7, 4))
    expected = 0.0
    for i in range(7):
        for j in range(4):
            d = float(np.linalg.norm(coords[i] - points[j]))
            expected += (cross[i, j] - d) ** 2 / cross[i, j]
    got = total_error(Configuration(coords), points, cross)
    assert relative_error(got, expected).max() <= 1e-12


def test_total_error_single_column_degenerates_to_point_sum():
    rng = np.random.default_rng(5)
    coords = rng.normal(size=(6, 2))
    y = rng.normal(size=(1, 2))
    cross = rng.uniform(0.5, 2.0, (6, 1))
    expected = 0.0
    for i in range(6):
        d = float(np.linalg.norm(coords[i] - y[0]))
        expected += (cross[i, 0] - d) ** 2 / cross[i, 0]
    assert total_error(Configuration(coords), y, cross) == pytest.approx(
        expected, rel=1e-12
    )


def test_total_error_skips_zero_deltas():
    ref = Configuration(np.zeros((2, 1)))
    y = np.array([[1.0]])
    cross = np.array([[0.0], [2.0]])  # first term would divide by zero
    assert total_error(ref, y, cross) == pytest.approx((2.0 - 1.0) ** 2 / 2.0)
    assert skipped_term_count(cross) == 1


def test_total_error_shape_checks():
    ref = Configuration(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        total_error(ref, np.zeros((2, 3)), np.ones((3, 2)))
    with pytest.raises(ValueError):
        total_error(ref, np.zeros((2, 2)), np.ones((3, 3)))


def test_time_op_sample_count():
    stats = time_op(lambda: None, repeats=3)
    assert len(stats.samples) == 3
    assert stats.mean >= 0.0
    assert stats.min <= stats.mean <= stats.max


def test_time_op_validates_repeats():
    with pytest.raises(ValueError):
        time_op(lambda: None, repeats=0)


def test_time_op_nested_containment():
    def inner():
        time.sleep(0.002)

    def outer():
        inner()
        time.sleep(0.002)

    inner_stats = time_op(inner, repeats=3)
    outer_stats = time_op(outer, repeats=3)
    assert inner_stats.mean <= outer_stats.mean


def build_report(rng, with_seconds=True):
    coords = rng.normal(size=(8, 2))
    points = rng.normal(size=(5, 2))
    cross = rng.uniform(0.3, 3.0, (8, 5))
    seconds = rng.uniform(1e-4, 1e-2, 5) if with_seconds else None
    return evaluate_embedding(
        "optimize", Configuration(coords), points, cross, 4, per_point_seconds=seconds
    )


def test_report_fields_consistent():
    report = build_report(np.random.default_rng(6))
    assert report.n_points == 5
    assert report.n_reference == 8
    assert report.per_point_errors.shape == (5,)
    assert report.total_error >= 0.0
    assert report.timing is not None


def test_report_json_round_trip(tmp_path):
    report = build_report(np.random.default_rng(7))
    path = tmp_path / "report.json"
    save_report(report, path)
    loaded = load_report(path)
    np.testing.assert_array_equal(loaded.per_point_errors, report.per_point_errors)
    np.testing.assert_array_equal(
        loaded.normalized_per_point_errors, report.normalized_per_point_errors
    )
    np.testing.assert_array_equal(loaded.per_point_seconds, report.per_point_seconds)
    assert loaded.total_error == report.total_error
    assert loaded.method == report.method
    assert loaded.n_landmarks == report.n_landmarks


def test_report_json_round_trip_without_timing(tmp_path):
    report = build_report(np.random.default_rng(8), with_seconds=False)
    path = tmp_path / "report.json"
    save_report(report, path)
    loaded = load_report(path)
    assert loaded.per_point_seconds is None
    assert loaded.timing is None


def test_report_csv_format(tmp_path):
    report = build_report(np.random.default_rng(9))
    path = tmp_path / "report.csv"
    save_report_csv(report, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "point_id,perr,perr_norm,seconds"
    assert len(lines) == 1 + report.n_points
    first = lines[1].split(",")
    assert int(first[0]) == 0
    assert float(first[1]) == report.per_point_errors[0]


def test_report_validation():
    with pytest.raises(ValueError):
        OseReport(
            method="other",
            n_landmarks=2,
            dimension=2,
            n_reference=3,
            n_points=1,
            per_point_errors=np.zeros(1),
            normalized_per_point_errors=np.zeros(1),
            total_error=0.0,
        )
    with pytest.raises(ValueError):
        OseReport(
            method="optimize",
            n_landmarks=2,
            dimension=2,
            n_reference=3,
            n_points=2,
            per_point_errors=np.zeros(1),
            normalized_per_point_errors=np.zeros(2),
            total_error=0.0,
        )
