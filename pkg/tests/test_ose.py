import numpy as np
import pytest
from conftest import central_difference_gradient, relative_error

from lsmds.descent import DescentOptions
from lsmds.ose import (
    PointQuery,
    embed_batch,
    embed_point,
    load_batch_deltas,
    point_stress,
    point_stress_gradient,
    save_batch_deltas,
)


def random_query(rng, n_landmarks=8, dimension=3):
    coords = rng.normal(size=(n_landmarks, dimension))
    deltas = rng.uniform(0.1, 3.0, n_landmarks)
    return PointQuery(deltas, coords)


def consistent_query(rng, n_landmarks, dimension):
    coords = rng.uniform(-1, 1, (n_landmarks, dimension))
    truth = rng.uniform(-1, 1, dimension)
    deltas = np.linalg.norm(coords - truth, axis=1)
    return PointQuery(deltas, coords), truth


def test_point_query_validation():
    with pytest.raises(ValueError):
        PointQuery(np.ones(3), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        PointQuery(np.array([-1.0]), np.zeros((1, 2)))
    with pytest.raises(ValueError):
        PointQuery(np.array([np.inf]), np.zeros((1, 2)))
    with pytest.raises(ValueError):
        PointQuery(np.ones((2, 2)), np.zeros((2, 2)))


def test_point_stress_exact_fit():
    rng = np.random.default_rng(0)
    query, truth = consistent_query(rng, 6, 3)
    assert point_stress(truth, query) == pytest.approx(0.0, abs=1e-25)


def test_point_stress_single_landmark():
    query = PointQuery(np.array([2.0]), np.zeros((1, 2)))
    assert point_stress(np.array([1.0, 0.0]), query) == pytest.approx(1.0)


def test_point_stress_matches_term_oracle():
    rng = np.random.default_rng(1)
    query = random_query(rng, n_landmarks=8, dimension=3)
    y = rng.normal(size=3)
    expected = 0.0
    for i in range(8):
        d = float(np.linalg.norm(query.landmark_coords[i] - y))
        expected += (d - query.deltas[i]) ** 2
    assert point_stress(y, query) == pytest.approx(expected, rel=1e-14)


def test_point_stress_dimension_mismatch():
    query = PointQuery(np.array([1.0]), np.zeros((1, 2)))
    with pytest.raises(ValueError):
        point_stress(np.zeros(3), query)


def test_gradient_zero_at_solution():
    rng = np.random.default_rng(2)
    query, truth = consistent_query(rng, 6, 2)
    g = point_stress_gradient(truth, query)
    assert np.max(np.abs(g)) < 1e-9


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, 4))
        query = random_query(rng, n, k)
        y = rng.normal(size=k)
        analytic = point_stress_gradient(y, query)
        numeric = central_difference_gradient(lambda v: point_stress(v, query), y)
        assert relative_error(analytic, numeric, floor=1e-4).max() <= 1e-5


def test_gradient_finite_at_coincident_landmark():
    query = PointQuery(np.array([1.0, 2.0]), np.array([[0.0, 0.0], [1.0, 1.0]]))
    g = point_stress_gradient(np.zeros(2), query)
    assert np.all(np.isfinite(g))


def test_embed_point_known_optimum():
    coords = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    truth = np.array([0.3, 0.4])
    deltas = np.linalg.norm(coords - truth, axis=1)
    y, iters = embed_point(PointQuery(deltas, coords))
    np.testing.assert_allclose(y, truth, atol=1e-4)
    assert iters >= 1


def test_embed_point_zero_start_is_optimal():
    query = PointQuery(np.array([0.0]), np.zeros((1, 3)))
    y, iters = embed_point(query)
    np.testing.assert_array_equal(y, np.zeros(3))
    assert iters == 0


def test_embed_point_deterministic():
    rng = np.random.default_rng(4)
    query = random_query(rng)
    y1, i1 = embed_point(query)
    y2, i2 = embed_point(query)
    np.testing.assert_array_equal(y1, y2)
    assert i1 == i2


def test_embed_point_custom_start():
    rng = np.random.default_rng(5)
    query, truth = consistent_query(rng, 10, 2)
    y, _ = embed_point(query, start=truth.copy())
    np.testing.assert_allclose(y, truth, atol=1e-12)


def test_consistency_recovery():
    # with more landmarks than dimensions the planted point is the global optimum
    rng = np.random.default_rng(6)
    hits = 0
    for _ in range(50):
        k = int(rng.integers(1, 4))
        query, truth = consistent_query(rng, int(rng.integers(k + 2, 12)), k)
        y, _ = embed_point(query)
        hits += bool(np.all(np.abs(y - truth) <= 1e-3))
    assert hits >= 48


def test_embed_batch_empty():
    out = embed_batch([])
    assert out.size == 0


def test_embed_batch_matches_sequential():
    rng = np.random.default_rng(7)
    coords = rng.normal(size=(6, 2))
    queries = [
        PointQuery(rng.uniform(0.1, 2.0, 6), coords) for _ in range(10)
    ]
    batch = embed_batch(queries)
    assert batch.shape == (10, 2)
    for i, query in enumerate(queries):
        expected, _ = embed_point(query)
        np.testing.assert_array_equal(batch[i], expected)


def test_embed_batch_single():
    rng = np.random.default_rng(8)
    query = random_query(rng)
    batch = embed_batch([query])
    np.testing.assert_array_equal(batch[0], embed_point(query)[0])


def test_embed_batch_landmarks_unchanged():
    rng = np.random.default_rng(9)
    coords = rng.normal(size=(5, 2))
    before = coords.tobytes()
    queries = [PointQuery(rng.uniform(0.1, 2.0, 5), coords) for _ in range(4)]
    embed_batch(queries)
    assert coords.tobytes() == before
    for q in queries:
        assert q.landmark_coords.tobytes() == before


def test_embed_batch_rejects_mixed_landmarks():
    rng = np.random.default_rng(10)
    a = PointQuery(np.ones(3), rng.normal(size=(3, 2)))
    b = PointQuery(np.ones(3), rng.normal(size=(3, 2)))
    with pytest.raises(ValueError):
        embed_batch([a, b])


def test_query_touches_exactly_l_dissimilarities():
    query = PointQuery(np.arange(1.0, 8.0), np.zeros((7, 2)))
    assert query.n_landmarks == 7
    assert query.deltas.shape == (7,)


def test_batch_deltas_io(tmp_path):
    rng = np.random.default_rng(11)
    deltas = rng.uniform(0.0, 5.0, (4, 6))
    path = tmp_path / "deltas.csv"
    save_batch_deltas(deltas, path)
    np.testing.assert_array_equal(load_batch_deltas(path), deltas)


def test_batch_file_workflow(tmp_path):
    # the whole file interface: deltas CSV + landmark-configuration CSV in,
    # coordinates CSV out, all reloadable
    from lsmds.embedding import Configuration, load_configuration, save_configuration

    rng = np.random.default_rng(12)
    landmark_coords = rng.normal(size=(5, 2))
    deltas = rng.uniform(0.1, 2.0, (3, 5))
    save_batch_deltas(deltas, tmp_path / "deltas.csv")
    save_configuration(Configuration(landmark_coords), tmp_path / "landmarks.csv")

    loaded_landmarks = load_configuration(tmp_path / "landmarks.csv").coords
    queries = [PointQuery(row, loaded_landmarks) for row in load_batch_deltas(tmp_path / "deltas.csv")]
    coords = embed_batch(queries)
    save_configuration(Configuration(coords), tmp_path / "coords.csv")

    reloaded = load_configuration(tmp_path / "coords.csv").coords
    np.testing.assert_array_equal(reloaded, coords)
    header = (tmp_path / "coords.csv").read_text().splitlines()[0]
    assert header == "id,c1,c2"
