import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multicov.core import ValidationError, mean_adjacency
from multicov.metrics import nmi
from multicov.msbmc import (
    MsbmcModel,
    PreconditionError,
    SimplifiedParams,
    expand_simplified,
    experiment1_model,
    kth_eigenvalue_bounds,
    misspecify_labels,
    population_matrices,
    sample,
)


def simple_model(b, n=12, k=2, r=2):
    b = np.asarray(b, dtype=float)
    return MsbmcModel(b=b, m=np.zeros((k, r)), community_sizes=(n // k,) * k)


def test_zero_probabilities_give_empty_layers():
    net, _, _ = sample(simple_model(np.zeros((2, 2, 2))), seed=0)
    assert all(w.nnz == 0 for w in net.layers)


def test_unit_probabilities_give_complete_graphs():
    net, _, _ = sample(simple_model(np.ones((1, 2, 2)), n=8), seed=0)
    assert np.array_equal(net.dense_layer(1), np.ones((8, 8)) - np.eye(8))


def test_edge_counts_within_binomial_band():
    p = 0.3
    net, _, _ = sample(simple_model(np.full((1, 2, 2), p), n=200), seed=4)
    pairs = 200 * 199 / 2
    count = net.layer(1).nnz / 2
    assert abs(count - p * pairs) <= 4 * np.sqrt(pairs * p * (1 - p))


def test_covariates_are_clamped():
    model = MsbmcModel(
        b=np.zeros((1, 1, 1)), m=np.array([[9.5]]), community_sizes=(500,), bound=10.0
    )
    _, cov, _ = sample(model, seed=1)
    assert cov.values.max() == 10.0 and cov.values.min() > 5.0
    assert cov.bound == 10.0


def test_covariate_means_follow_communities():
    sp = SimplifiedParams(p=(0.1,), q=(0.1,), m1=2.0, m2=-1.0, r=2, k=2, n=2000)
    _, cov, z = sample(expand_simplified(sp), seed=3)
    means = np.array([cov.values[z == c].mean(axis=0) for c in (1, 2)])
    assert np.allclose(means, [[2.0, -1.0], [-1.0, 2.0]], atol=0.1)


def test_sampling_is_deterministic():
    model = experiment1_model("B1", 90)
    a = sample(model, 7, shuffle=True)
    b = sample(model, 7, shuffle=True)
    for wa, wb in zip(a[0].layers, b[0].layers):
        assert (wa != wb).nnz == 0
    assert np.array_equal(a[1].values, b[1].values)
    assert np.array_equal(a[2], b[2])


def test_expand_simplified_example():
    sp = SimplifiedParams(p=(0.5, 0.1), q=(0.2, 0.3), m1=1.0, m2=0.0, r=4, k=2, n=6)
    model = expand_simplified(sp)
    assert np.allclose(model.b[0], [[0.5, 0.2], [0.2, 0.5]])
    assert np.allclose(model.b[1], [[0.1, 0.3], [0.3, 0.1]])
    assert np.array_equal(model.m, [[1, 0, 1, 0], [0, 1, 0, 1]])
    assert model.community_sizes == (3, 3)


def test_simplified_params_validation():
    with pytest.raises(ValidationError):
        SimplifiedParams(p=(0.5,), q=(0.2, 0.1), m1=1, m2=0, r=2, k=2, n=4)
    with pytest.raises(ValidationError):
        SimplifiedParams(p=(0.5,), q=(0.2,), m1=1, m2=0, r=2, k=2, n=5)


def test_experiment1_values():
    b1 = experiment1_model("B1", 90).b
    assert np.isclose(b1[0, 0, 0], 0.02) and np.isclose(b1[0, 0, 1], 0.015)
    b2 = experiment1_model("B2", 90).b
    assert np.isclose(b2[4, 0, 1], 0.05) and b2[4, 0, 1] > b2[4, 0, 0]
    m = experiment1_model("B1", 90).m
    # layer 3 block: mean 0.5 on the own-community coordinate
    assert np.allclose(m[:, 6:9], 0.5 * np.eye(3))
    assert m.shape == (3, 15)


def test_misspecify_without_noise_copies_labels():
    z = np.repeat([1, 2, 3], 10)
    out = misspecify_labels(z, 0.0, 4, seed=1)
    assert out.shape == (4, 30)
    assert np.all(out == z)


def test_misspecify_flip_rate_and_targets():
    z = np.repeat([1, 2, 3], 2000)
    out = misspecify_labels(z, 0.3, 2, seed=2)
    flipped = out != z
    assert abs(flipped.mean() - 0.3) < 0.01
    moved_from_one = out[:, z == 1][flipped[:, z == 1]]
    assert set(moved_from_one.tolist()) == {2, 3}
    assert abs(np.mean(moved_from_one == 2) - 0.5) < 0.03


def test_misspecify_half_rate_destroys_information_for_two_groups():
    z = np.repeat([1, 2], 5000)
    out = misspecify_labels(z, 0.5 - 1e-12, 1, seed=3)
    assert nmi(z, out[0]) < 1e-3


def test_layer_labels_drive_layers_and_tied_covariates():
    model = experiment1_model("B1", 30)
    z = model.block_labels()
    ll = np.tile(z, (5, 1))
    ll[4] = np.roll(z, 10)
    _, cov, z_out = sample(model, 0, layer_labels=ll)
    assert np.array_equal(z_out, z)
    with pytest.raises(ValidationError):
        sample(model, 0, layer_labels=ll[:3])


def test_population_two_blocks_closed_form():
    sp = SimplifiedParams(p=(0.6,), q=(0.2,), m1=0.0, m2=0.0, r=2, k=2, n=4)
    pop = population_matrices(expand_simplified(sp), tau=0.0, alpha=0.0)
    # quotient matrix [[2p, 2q], [2q, 2p]] over degree 2p + 2q = 1.6
    vals = np.sort(np.linalg.eigvalsh(pop.phi_star))[::-1]
    assert np.allclose(vals, [1.0, 0.5, 0.0, 0.0], atol=1e-12)


def test_population_equal_probabilities_has_rank_one():
    sp = SimplifiedParams(p=(0.3,), q=(0.3,), m1=0.0, m2=0.0, r=2, k=2, n=8)
    pop = population_matrices(expand_simplified(sp), tau=1.0, alpha=0.0)
    assert np.linalg.matrix_rank(pop.phi_star, tol=1e-10) == 1


def test_population_single_layer_scanc_equals_scalc():
    sp = SimplifiedParams(p=(0.4,), q=(0.1,), m1=1.0, m2=0.0, r=3, k=3, n=9)
    pop = population_matrices(expand_simplified(sp), tau=0.5, alpha=0.7)
    assert np.allclose(pop.scanc, pop.scalc, atol=1e-14)


def test_population_mean_adjacency_matches_sample_average():
    model = experiment1_model("B2", 60)
    pop = population_matrices(model, tau=1.0, alpha=0.0)
    nets = [sample(model, s)[0] for s in range(200)]
    avg = np.mean([mean_adjacency(n) for n in nets], axis=0)
    b = model.b.mean(axis=0)
    z = model.block_labels() - 1
    expected = b[np.ix_(z, z)]
    np.fill_diagonal(expected, 0)
    assert np.abs(avg - expected).max() < 0.05
    assert pop.h_star.shape == (60, 60)


def test_bounds_require_constant_degree():
    sp = SimplifiedParams(p=(0.5, 0.4), q=(0.1, 0.1), m1=1, m2=0, r=2, k=2, n=10)
    with pytest.raises(PreconditionError):
        kth_eigenvalue_bounds(sp, 1.0, 0.1)


def test_bounds_equal_for_equal_gaps():
    sp = SimplifiedParams(p=(0.5, 0.5), q=(0.1, 0.1), m1=1, m2=0, r=2, k=2, n=10)
    a, b = kth_eigenvalue_bounds(sp, 1.0, 0.1)
    assert abs(a - b) <= 1e-12


def test_bounds_cancelled_gaps():
    # gaps +0.2 and -0.2 cancel for the aggregated network but not for the
    # aggregated squared Laplacians
    sp = SimplifiedParams(p=(0.3, 0.1), q=(0.1, 0.3), m1=0, m2=0, r=2, k=2, n=10)
    a, b = kth_eigenvalue_bounds(sp, 0.0, 0.0)
    assert a == pytest.approx(0.0, abs=1e-15)
    # 0.2^2 / (0.3 + 0.1)^2
    assert b == pytest.approx(0.25, rel=1e-12)


@st.composite
def constant_degree_params(draw):
    k = draw(st.integers(2, 4))
    n_layers = draw(st.integers(1, 4))
    c = draw(st.floats(0.1, 0.8))
    ps, qs = [], []
    for _ in range(n_layers):
        q = draw(st.floats(0.0, c / (k - 1)))
        ps.append(c - (k - 1) * q)
        qs.append(q)
    m2 = draw(st.floats(0.0, 1.0))
    m1 = m2 + draw(st.floats(0.0, 1.0))
    size = draw(st.integers(2, 8))
    return SimplifiedParams(
        p=tuple(ps), q=tuple(qs), m1=m1, m2=m2, r=k * draw(st.integers(1, 3)), k=k, n=k * size
    )


@settings(max_examples=40, deadline=None)
@given(sp=constant_degree_params(), tau=st.floats(0.0, 5.0), alpha=st.floats(0.0, 2.0))
def test_population_kth_eigenvalue_above_bound(sp, tau, alpha):
    bound_scanc, bound_scalc = kth_eigenvalue_bounds(sp, tau, alpha)
    assert bound_scalc >= bound_scanc - 1e-12
    pop = population_matrices(expand_simplified(sp), tau, alpha)
    lam_scanc = np.sort(np.linalg.eigvalsh(pop.scanc))[::-1][sp.k - 1]
    lam_scalc = np.sort(np.linalg.eigvalsh(pop.scalc))[::-1][sp.k - 1]
    assert lam_scanc - bound_scanc >= -1e-9
    assert lam_scalc - bound_scalc >= -1e-9
