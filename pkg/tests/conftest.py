import numpy as np
import pytest

from propclust import GenSpec, euclidean_instance, generate, matrix_instance


def line_instance(*locations, candidates=None):
    """Agents on a line; candidates default to all points."""
    coords = [[float(x)] for x in locations]
    n = len(coords)
    cands = tuple(range(n)) if candidates is None else tuple(candidates)
    return euclidean_instance(coords, tuple(range(n)), cands, "l2")


def random_shortest_path_instance(seed, n_max=8, m_max=6):
    """Matrix instance from a random graph metric (shortest-path closure),
    generally non-Euclidean."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    points = max(n, m)
    raw = rng.uniform(0.1, 3.0, (points, points))
    raw = (raw + raw.T) / 2.0
    np.fill_diagonal(raw, 0.0)
    for mid in range(points):
        raw = np.minimum(raw, raw[:, mid, None] + raw[None, mid, :])
    return matrix_instance(raw, tuple(range(n)), tuple(range(m)))


def random_euclidean(seed, n_max=10, m_max=8, norm="l2"):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    return generate(GenSpec("euclidean_uniform", n=n, m=m, dim=2, norm=norm, seed=seed))


@pytest.fixture
def paper_line():
    """Four agents at 0 and six at 1, candidates at both locations."""
    return generate(GenSpec("line_paper", n=10))
