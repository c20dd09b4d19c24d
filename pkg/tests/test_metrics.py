from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multicov.core import ValidationError
from multicov.metrics import (
    apply_merge,
    best_merged_nmi,
    confusion_table,
    misclustering_rate,
    nmi,
)


def brute_err(truth, est):
    """Minimum over every relabeling of est of the mismatch fraction."""
    truth, est = list(truth), list(est)
    names = sorted(set(est))
    targets = sorted(set(truth) | set(est))
    pool = targets + [-(i + 1) for i in range(len(names))]
    best = 1.0
    for image in permutations(pool, len(names)):
        mapping = dict(zip(names, image))
        best = min(best, sum(t != mapping[e] for t, e in zip(truth, est)) / len(truth))
    return best


def test_identical():
    assert misclustering_rate([1, 2, 3, 1], [1, 2, 3, 1]) == 0.0


def test_pure_relabeling():
    assert misclustering_rate([1, 1, 2, 2], [2, 2, 1, 1]) == 0.0


def test_one_error_in_four():
    assert brute_err([1, 1, 2, 2], [1, 2, 2, 2]) == 0.25
    assert misclustering_rate([1, 1, 2, 2], [1, 2, 2, 2]) == 0.25


def test_length_mismatch():
    with pytest.raises(ValidationError):
        misclustering_rate([1, 2], [1])
    with pytest.raises(ValidationError):
        nmi([1, 2], [1])


def test_unequal_label_counts_are_padded():
    assert misclustering_rate([1, 1, 2, 2, 3, 3], [1, 1, 1, 1, 2, 2]) == pytest.approx(2 / 6)
    assert misclustering_rate([1, 1, 1, 1], [1, 2, 3, 4]) == 0.75


def test_confusion_table_total():
    t = confusion_table([1, 2, 2, 3], [2, 2, 1, 1])
    assert t.sum() == 4 and t.shape == (3, 2)


def test_hungarian_matches_exhaustive_many_instances():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        k = int(rng.integers(1, 5))
        t = rng.integers(1, k + 1, size=n)
        e = rng.integers(1, k + 1, size=n)
        assert misclustering_rate(t, e, "hungarian") == misclustering_rate(t, e, "exhaustive")


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=8),
)
def test_matches_brute_force(pairs):
    t = [a for a, _ in pairs]
    e = [b for _, b in pairs]
    assert misclustering_rate(t, e) == pytest.approx(brute_err(t, e), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    labels=st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)), min_size=1, max_size=15),
    perm=st.permutations([1, 2, 3, 4]),
)
def test_relabeling_invariance(labels, perm):
    t = np.array([a for a, _ in labels])
    e = np.array([b for _, b in labels])
    renamed = np.array([perm[v - 1] for v in e])
    assert misclustering_rate(t, renamed) == misclustering_rate(t, e)
    assert misclustering_rate(np.array([perm[v - 1] for v in t]), e) == misclustering_rate(t, e)
    assert misclustering_rate(t, np.array([perm[v - 1] for v in t])) == 0.0
    assert nmi(t, e) == pytest.approx(nmi(e, t), abs=1e-12)
    assert 0.0 <= nmi(t, e) <= 1.0


def test_nmi_identical():
    assert nmi([1, 1, 2, 2, 3], [1, 1, 2, 2, 3]) == 1.0


def test_nmi_constant_partition():
    assert nmi([1, 1, 1, 1], [1, 2, 1, 2]) == 0.0
    assert nmi([1, 1], [1, 1]) == 0.0


def test_nmi_independent_partitions():
    # p(a, b) = 1/4 = p(a) p(b) for every cell, so the mutual information is 0
    assert nmi([1, 1, 2, 2], [1, 2, 1, 2]) == 0.0


def test_nmi_direct_entropy_value():
    a = [1, 1, 1, 2, 2, 2]
    b = [1, 1, 2, 2, 2, 2]
    pa = np.array([0.5, 0.5])
    pb = np.array([2 / 6, 4 / 6])
    joint = {(1, 1): 2 / 6, (1, 2): 1 / 6, (2, 2): 3 / 6}
    mi = sum(p * np.log(p / (pa[i - 1] * pb[j - 1])) for (i, j), p in joint.items())
    ha, hb = -(pa * np.log(pa)).sum(), -(pb * np.log(pb)).sum()
    assert nmi(a, b) == pytest.approx(mi / ((ha + hb) / 2), rel=1e-12)


def test_best_merged_nmi():
    truth = [1, 1, 2, 2, 3]
    est = [1, 1, 2, 2, 2]
    merges = [{3: 1}, {3: 2}]
    assert best_merged_nmi(truth, est, merges) == 1.0
    assert apply_merge(truth, {3: 1}).tolist() == [1, 1, 2, 2, 1]
    assert best_merged_nmi(truth, est, []) == nmi(truth, est)


def test_nmi_agrees_with_scikit_learn():
    from sklearn.metrics import normalized_mutual_info_score

    rng = np.random.default_rng(1)
    for _ in range(200):
        n = int(rng.integers(2, 40))
        a = rng.integers(1, 5, size=n)
        b = rng.integers(1, 5, size=n)
        expected = normalized_mutual_info_score(a, b, average_method="arithmetic")
        assert nmi(a, b) == pytest.approx(expected, abs=1e-12)
