import numpy as np
import pytest

from scribbleseg.graph import AffinityGraph


def make_a4() -> AffinityGraph:
    """Two weakly coupled pairs: {0,1} at 0.9, {2,3} at 0.8, cross ties 0.1."""
    a = np.zeros((4, 4))
    a[0, 1] = a[1, 0] = 0.9
    a[2, 3] = a[3, 2] = 0.8
    a[0, 2] = a[2, 0] = 0.1
    a[1, 3] = a[3, 1] = 0.1
    return AffinityGraph(a)


@pytest.fixture
def a4() -> AffinityGraph:
    return make_a4()


def random_affinity(rng: np.random.Generator, n: int, density: float = 1.0) -> AffinityGraph:
    """Random symmetric, zero-diagonal affinity matrix with entries in [0, 1]."""
    upper = np.triu(rng.uniform(0.0, 1.0, size=(n, n)), k=1)
    if density < 1.0:
        upper *= rng.uniform(0.0, 1.0, size=(n, n)) < density
    return AffinityGraph(upper + upper.T)
