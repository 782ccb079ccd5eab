import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from credal_medoids.datagen import (
    CIRCLE_CENTERS,
    CIRCLE_RADIUS,
    COUNTRIES,
    COUNTRIES_TRUTH,
    FIXTURES,
    KARATE_TRUTH,
    builtin_fixture,
    generate_circles,
    generate_gaussian_ring,
)
from credal_medoids.dissimilarity import AdjacencyMatrix, DissimilarityMatrix
from credal_medoids.errors import FixtureNotFoundError, InvalidArgumentError


@given(st.integers(1, 60), st.integers(0, 1000), st.sampled_from(["uniform", "polar-grid"]))
def test_circles_shape_and_support(per, seed, layout):
    data = generate_circles(per, seed, layout)
    assert data.n == 3 * per
    np.testing.assert_array_equal(data.truth, np.repeat([0, 1, 2], per))
    for k, centre in enumerate(CIRCLE_CENTERS):
        pts = data.points[data.truth == k]
        assert np.all(np.linalg.norm(pts - np.array(centre), axis=1) <= CIRCLE_RADIUS + 1e-9)


def test_circles_are_seeded():
    a, b = generate_circles(50, 3), generate_circles(50, 3)
    np.testing.assert_array_equal(a.points, b.points)
    assert not np.array_equal(a.points, generate_circles(50, 4).points)


def test_polar_grid_rings():
    data = generate_circles(361, 0, "polar-grid")
    radii = np.linalg.norm(data.points[data.truth == 1], axis=1)
    rings, counts = np.unique(np.round(radii, 9), return_counts=True)
    assert len(rings) == 19 and set(counts) == {19}
    np.testing.assert_allclose(rings, CIRCLE_RADIUS * np.arange(1, 20) / 19)


def test_circles_validation():
    with pytest.raises(InvalidArgumentError):
        generate_circles(0)
    with pytest.raises(InvalidArgumentError):
        generate_circles(10, layout="spiral")


def test_gaussian_ring_means():
    data = generate_gaussian_ring(k=6, per_component=4000, radius=10, sd=1, seed=1)
    assert data.n == 24000
    for j in range(6):
        angle = 2 * np.pi * j / 6
        mean = data.points[data.truth == j].mean(axis=0)
        np.testing.assert_allclose(mean, [10 * np.cos(angle), 10 * np.sin(angle)], atol=0.1)
    with pytest.raises(InvalidArgumentError):
        generate_gaussian_ring(k=1)


def test_countries_fixture():
    fx = builtin_fixture("countries")
    assert isinstance(fx.payload, DissimilarityMatrix)
    assert fx.payload.labels == COUNTRIES
    assert fx.payload.n == 12 and len(fx.truth) == 12
    assert fx.truth == COUNTRIES_TRUTH
    groups = {g: {COUNTRIES[i] for i, t in enumerate(COUNTRIES_TRUTH) if t == g} for g in range(3)}
    assert groups[0] == {"Belgium", "France", "Israel", "USA"}
    assert groups[2] == {"China", "Cuba", "USSR", "Yugoslavia"}


def test_karate_fixture_matches_networkx():
    fx = builtin_fixture("karate")
    assert isinstance(fx.payload, AdjacencyMatrix)
    g = nx.karate_club_graph()
    np.testing.assert_array_equal(fx.payload.entries, nx.to_numpy_array(g, nodelist=range(34)).astype(bool))
    factions = tuple(0 if g.nodes[i]["club"] == "Mr. Hi" else 1 for i in range(34))
    assert KARATE_TRUTH == factions == fx.truth
    assert fx.payload.edge_count == 78


def test_x12_is_mirror_symmetric_with_far_outlier():
    pts = builtin_fixture("x12").payload.points
    left, bridge, right, outlier = pts[:5], pts[5], pts[6:11], pts[11]
    np.testing.assert_allclose(np.sort(-left[:, 0]), np.sort(right[:, 0]))
    np.testing.assert_allclose(bridge, [0.0, 0.0])
    assert np.min(np.linalg.norm(pts[:11] - outlier, axis=1)) > 8


def test_x11_object_eleven_sits_between_groups():
    fx = builtin_fixture("x11")
    pts = fx.payload.points
    left = pts[:4].mean(axis=0)
    right = pts[4:10].mean(axis=0)
    obj = pts[10]
    assert left[0] < obj[0] < right[0]
    assert fx.truth[10] == 1


def test_unknown_fixture():
    with pytest.raises(FixtureNotFoundError) as info:
        builtin_fixture("iris")
    assert isinstance(info.value, KeyError)
    assert "iris" in str(info.value)
    assert set(FIXTURES) == {"countries", "karate", "x12", "x11"}
