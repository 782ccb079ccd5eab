import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# Lines reported by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_dissimilarity(rng: np.random.Generator, n: int, dim: int = 2) -> np.ndarray:
    """Euclidean distances between ``n`` random points: symmetric, zero diagonal, no ties."""
    pts = rng.normal(size=(n, dim))
    return np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
