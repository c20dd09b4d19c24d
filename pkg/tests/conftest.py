import numpy as np
import pytest

from multicov.core import MultilayerNetwork


def random_network(n, n_layers, density, seed):
    rng = np.random.default_rng(seed)
    layers = []
    for _ in range(n_layers):
        upper = np.triu(rng.random((n, n)) < density, k=1).astype(float)
        layers.append(upper + upper.T)
    return MultilayerNetwork(layers)


def dense_laplacian(w, tau):
    """Straight transcription of (D + tau I)^{-1/2} W (D + tau I)^{-1/2}."""
    d = np.diag(w.sum(axis=1)) + tau * np.eye(w.shape[0])
    root = np.diag(1.0 / np.sqrt(np.diag(d)))
    return root @ w @ root


@pytest.fixture
def toy_network():
    # two triangles joined by one edge, second layer drops an edge and adds another
    w1 = np.zeros((6, 6))
    for i, j in [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]:
        w1[i, j] = w1[j, i] = 1
    w2 = w1.copy()
    w2[2, 3] = w2[3, 2] = 0
    w2[0, 5] = w2[5, 0] = 1
    return MultilayerNetwork([w1, w2])


@pytest.fixture
def toy_covariates():
    return np.array([[1.0, 0.2], [0.9, 0.1], [1.1, -0.1], [-1.0, 0.3], [-0.8, 0.0], [-1.2, 0.1]])
