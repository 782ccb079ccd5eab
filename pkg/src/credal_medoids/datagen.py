"""Synthetic point sets and the bundled example data."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Union

import numpy as np

from .dissimilarity import (
    AdjacencyMatrix,
    DissimilarityMatrix,
    euclidean_dissimilarity,
    load_matrix,
    validate_dissimilarity,
)
from .errors import FixtureNotFoundError, InvalidArgumentError

CIRCLE_CENTERS = ((5.0, 6.0), (0.0, 0.0), (9.0, 0.0))
CIRCLE_RADIUS = 5.0
CIRCLE_LAYOUTS = ("uniform", "polar-grid")

COUNTRIES = (
    "Belgium", "Brazil", "China", "Cuba", "Egypt", "France",
    "India", "Israel", "USA", "USSR", "Yugoslavia", "Zaire",
)
# 0 Western, 1 developing, 2 communist.
COUNTRIES_TRUTH = (0, 1, 2, 2, 1, 0, 1, 0, 0, 2, 2, 1)
# 0 follows the instructor (node 1), 1 the administrator (node 34).
KARATE_TRUTH = (
    0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0,
    0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1,
)

# Two mirrored groups of five around a bridge object, plus an outlier.
X12_POINTS = (
    (-5.0, 0.0), (-3.0, 2.0), (-3.0, 0.0), (-3.0, -2.0), (-1.0, 0.0),
    (0.0, 0.0),
    (1.0, 0.0), (3.0, 2.0), (3.0, 0.0), (3.0, -2.0), (5.0, 0.0),
    (0.0, 10.0),
)
X12_TRUTH = (0, 0, 0, 0, 0, -1, 1, 1, 1, 1, 1, -1)

# A diamond around (-1, 1) whose right vertex (object 4) points at object 11,
# six points around (1, 1), and object 11 just right of the midpoint.
X11_POINTS = (
    (-1.3, 1.0), (-1.0, 1.3), (-1.0, 0.7), (-0.7, 1.0),
    (0.5, 1.0), (0.75, 1.35), (1.1, 1.2), (1.1, 0.8), (0.75, 0.65), (1.5, 1.0),
    (0.05, 1.0),
)
X11_TRUTH = (0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1)

FIXTURES = ("countries", "karate", "x12", "x11")


@dataclass(frozen=True)
class LabeledPointSet:
    points: np.ndarray = field(repr=False)
    truth: np.ndarray = field(repr=False)
    seed: int | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        truth = np.asarray(self.truth, dtype=int)
        if pts.ndim != 2 or pts.shape[0] != truth.shape[0]:
            raise InvalidArgumentError("points and truth must have the same length")
        pts.setflags(write=False)
        truth.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "truth", truth)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def dissimilarity(self, squared: bool = False) -> DissimilarityMatrix:
        return euclidean_dissimilarity(self.points, squared=squared)


@dataclass(frozen=True)
class Fixture:
    name: str
    payload: Union[DissimilarityMatrix, AdjacencyMatrix, LabeledPointSet]
    truth: tuple[int, ...] | None = None


def _uniform_disk(rng: np.random.Generator, count: int, radius: float) -> np.ndarray:
    out = np.empty((0, 2))
    while out.shape[0] < count:
        cand = rng.uniform(-radius, radius, size=(2 * (count - out.shape[0]) + 8, 2))
        cand = cand[np.sum(cand**2, axis=1) <= radius**2]
        out = np.vstack([out, cand])
    return out[:count]


def _polar_grid(rng: np.random.Generator, count: int, radius: float) -> np.ndarray:
    """Concentric rings of equally spaced points, each ring at a random phase."""
    rings = max(1, int(round(np.sqrt(count))))
    per_ring = np.full(rings, count // rings)
    per_ring[: count % rings] += 1
    radii = radius * np.arange(1, rings + 1) / rings
    pts = []
    for r, k in zip(radii, per_ring):
        phase = rng.uniform(0.0, 2 * np.pi / k)
        angles = phase + 2 * np.pi * np.arange(k) / k
        pts.append(np.column_stack([r * np.cos(angles), r * np.sin(angles)]))
    return np.vstack(pts)


def generate_circles(points_per_circle: int = 361, seed: int | None = 0, layout: str = "uniform") -> LabeledPointSet:
    """Three overlapping disks of radius 5 centred at (5,6), (0,0) and (9,0).

    ``uniform`` samples each disk uniformly by rejection; ``polar-grid``
    places the points on concentric rings (``sqrt(n)`` rings when ``n`` is
    a square) with a seeded phase per ring.
    """
    if points_per_circle < 1:
        raise InvalidArgumentError("points_per_circle must be at least 1")
    if layout not in CIRCLE_LAYOUTS:
        raise InvalidArgumentError(f"layout must be one of {CIRCLE_LAYOUTS}")
    rng = np.random.default_rng(seed)
    draw = _uniform_disk if layout == "uniform" else _polar_grid
    pts = [np.asarray(c) + draw(rng, points_per_circle, CIRCLE_RADIUS) for c in CIRCLE_CENTERS]
    truth = np.repeat(np.arange(len(CIRCLE_CENTERS)), points_per_circle)
    return LabeledPointSet(np.vstack(pts), truth, seed)


def generate_gaussian_ring(
    k: int = 10,
    per_component: int = 1000,
    radius: float = 10.0,
    sd: float = 1.0,
    seed: int | None = 0,
) -> LabeledPointSet:
    """Isotropic Gaussian blobs whose means sit at angles ``2 pi j / k`` on a circle."""
    if k < 2:
        raise InvalidArgumentError("k must be at least 2")
    if per_component < 1 or sd < 0 or radius < 0:
        raise InvalidArgumentError("per_component must be positive; radius and sd nonnegative")
    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * np.arange(k) / k
    means = radius * np.column_stack([np.cos(angles), np.sin(angles)])
    pts = np.repeat(means, per_component, axis=0) + rng.normal(0.0, sd, size=(k * per_component, 2))
    truth = np.repeat(np.arange(k), per_component)
    return LabeledPointSet(pts, truth, seed)


def _resource(name: str):
    return resources.files("credal_medoids").joinpath("data").joinpath(name)


def builtin_fixture(name: str) -> Fixture:
    """One of the bundled data sets: ``countries``, ``karate``, ``x12`` or ``x11``."""
    if name == "countries":
        with _resource("countries.csv").open("rb") as fh:
            d = validate_dissimilarity(load_matrix(fh).values, COUNTRIES)
        return Fixture(name, d, COUNTRIES_TRUTH)
    if name == "karate":
        with _resource("karate.edges").open("rb") as fh:
            adj = load_matrix(fh, format="edge-list")
        return Fixture(name, adj, KARATE_TRUTH)
    if name == "x12":
        return Fixture(name, LabeledPointSet(np.array(X12_POINTS), np.array(X12_TRUTH)), X12_TRUTH)
    if name == "x11":
        return Fixture(name, LabeledPointSet(np.array(X11_POINTS), np.array(X11_TRUTH)), X11_TRUTH)
    raise FixtureNotFoundError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
