import numpy as np
import pytest

from multicov.core import ValidationError
from multicov.kmeans import kmeans
from multicov.msbmc import SimplifiedParams, expand_simplified, population_matrices
from multicov.spectral import embed, top_eigenpairs


def random_symmetric(n, seed):
    a = np.random.default_rng(seed).normal(size=(n, n))
    return (a + a.T) / 2


def test_identity():
    res = top_eigenpairs(np.eye(3), 2)
    assert np.allclose(res.values, [1, 1])
    assert np.allclose(res.vectors.T @ res.vectors, np.eye(2))


def test_magnitude_ordering():
    res = top_eigenpairs(np.diag([3.0, -5.0, 1.0]), 2)
    assert np.allclose(res.values, [-5, 3])


def test_ties_go_to_positive_value():
    res = top_eigenpairs(np.diag([-2.0, 2.0, 1.0]), 2)
    assert res.values.tolist() == [2.0, -2.0]


@pytest.mark.parametrize("n,m", [(20, 3), (120, 4), (150, 1)])
def test_matches_full_decomposition(n, m):
    a = random_symmetric(n, n)
    full = np.linalg.eigvalsh(a)
    expected = full[np.argsort(-np.abs(full))][:m]
    res = top_eigenpairs(a, m)
    assert np.allclose(res.values, expected, atol=1e-10)
    resid = np.linalg.norm(a @ res.vectors - res.vectors * res.values, axis=0)
    assert np.all(resid <= 1e-6 * np.linalg.norm(a, 2))
    assert np.allclose(res.vectors.T @ res.vectors, np.eye(m), atol=1e-8)


def test_psd_shortcut_agrees():
    x = np.random.default_rng(1).normal(size=(200, 10))
    a = x @ x.T
    full = top_eigenpairs(a, 4)
    short = top_eigenpairs(a, 4, psd=True)
    assert np.allclose(full.values, short.values)
    assert np.allclose(np.abs(full.vectors.T @ short.vectors), np.eye(4), atol=1e-8)


def test_arpack_path_agrees():
    a = random_symmetric(300, 3)
    dense = top_eigenpairs(a, 3)
    lanczos = top_eigenpairs(a, 3, solver="arpack")
    assert np.allclose(dense.values, lanczos.values, atol=1e-8)


def test_sign_convention_and_determinism():
    a = random_symmetric(30, 7)
    r1, r2 = top_eigenpairs(a, 3), top_eigenpairs(a, 3)
    assert np.array_equal(r1.vectors, r2.vectors)
    for col in r1.vectors.T:
        first = col[np.abs(col) > 1e-12][0]
        assert first > 0


def test_residual_frobenius():
    a = random_symmetric(60, 11)
    k = 4
    res = top_eigenpairs(a, k)
    lhs = np.linalg.norm(a @ res.vectors - res.vectors @ np.diag(res.values))
    assert lhs <= 1e-6 * np.linalg.norm(a) * np.sqrt(k)


def test_rejects_non_symmetric():
    with pytest.raises(ValidationError):
        top_eigenpairs(np.array([[0.0, 1.0], [0.0, 0.0]]), 1)
    with pytest.raises(ValidationError):
        top_eigenpairs(np.eye(3), 4)


def test_block_diagonal_rows_constant_within_block():
    w = np.zeros((6, 6))
    w[:3, :3] = 1
    w[3:, 3:] = 1
    np.fill_diagonal(w, 0)
    # the leading eigenspace is spanned by the block indicators
    xi = embed(w, 2)
    assert np.allclose(xi[:3], xi[0], atol=1e-10)
    assert np.allclose(xi[3:], xi[3], atol=1e-10)


def test_full_rank_embedding_is_orthogonal():
    xi = embed(random_symmetric(5, 2), 5)
    assert np.allclose(xi.T @ xi, np.eye(5), atol=1e-10)


def test_population_embedding_has_k_distinct_rows():
    sp = SimplifiedParams(p=(0.3, 0.25), q=(0.1, 0.05), m1=1.0, m2=0.0, r=3, k=3, n=30)
    pop = population_matrices(expand_simplified(sp), tau=1.0, alpha=0.0)
    xi = embed(pop.phi_star_sq, 3)
    distinct = np.unique(np.round(xi, 8), axis=0)
    assert distinct.shape[0] == 3


def test_kmeans_invariant_to_rotation():
    rng = np.random.default_rng(5)
    centers = np.array([[3.0, 0], [0, 3.0], [-3.0, -3.0]])
    xi = np.repeat(centers, 20, axis=0) + rng.normal(scale=0.2, size=(60, 2))
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    a = kmeans(xi, 3, seed=1).labels
    b = kmeans(xi @ q, 3, seed=1).labels
    assert np.array_equal(a, b)
