"""Agreement between partitions: mis-clustering rate and NMI."""

from __future__ import annotations

from itertools import permutations
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import ValidationError, check_labels

EXHAUSTIVE_MAX_K = 8


def confusion_table(truth, est) -> np.ndarray:
    """Counts[a - 1, b - 1] of nodes with true label a and estimated label b."""
    t = check_labels(truth)
    e = check_labels(est)
    if t.size != e.size:
        raise ValidationError(f"label vectors differ in length: {t.size} vs {e.size}")
    kt = int(t.max()) if t.size else 1
    ke = int(e.max()) if e.size else 1
    table = np.zeros((kt, ke), dtype=np.int64)
    np.add.at(table, (t - 1, e - 1), 1)
    return table


def _square(table: np.ndarray) -> np.ndarray:
    s = max(table.shape)
    out = np.zeros((s, s), dtype=table.dtype)
    out[: table.shape[0], : table.shape[1]] = table
    return out


def _best_match_exhaustive(table: np.ndarray) -> int:
    s = table.shape[0]
    perms = np.array(list(permutations(range(s))))
    return int(table[np.arange(s), perms].sum(axis=1).max())


def _best_match_hungarian(table: np.ndarray) -> int:
    rows, cols = linear_sum_assignment(table, maximize=True)
    return int(table[rows, cols].sum())


def misclustering_rate(truth, est, method: str = "auto") -> float:
    """Fraction of nodes misassigned under the best renaming of estimated labels.

    ``method`` is "exhaustive", "hungarian" or "auto" (exhaustive up to
    eight labels).
    """
    table = _square(confusion_table(truth, est))
    n = int(table.sum())
    if n == 0:
        return 0.0
    if method == "auto":
        method = "exhaustive" if table.shape[0] <= EXHAUSTIVE_MAX_K else "hungarian"
    if method == "exhaustive":
        matched = _best_match_exhaustive(table)
    elif method == "hungarian":
        matched = _best_match_hungarian(table)
    else:
        raise ValueError(f"unknown method {method!r}")
    return (n - matched) / n


def _entropy(counts: np.ndarray) -> float:
    # sorted so that equal count multisets give bitwise equal entropies
    p = np.sort(counts[counts > 0].ravel()) / counts.sum()
    return float(-(p * np.log(p)).sum())


def nmi(a, b) -> float:
    """Mutual information over the arithmetic mean of the two entropies.

    Returns 0 when both entropies vanish.
    """
    table = confusion_table(a, b).astype(float)
    n = table.sum()
    if n == 0:
        return 0.0
    ha = _entropy(table.sum(axis=1))
    hb = _entropy(table.sum(axis=0))
    if ha + hb == 0:
        return 0.0
    mi = ha + hb - _entropy(table)
    return float(np.clip(mi / ((ha + hb) / 2.0), 0.0, 1.0))


def apply_merge(labels, mapping: Mapping[int, int]) -> np.ndarray:
    """Rename labels through ``mapping``; unmapped labels keep their value."""
    z = check_labels(labels)
    return np.array([int(mapping.get(int(v), v)) for v in z], dtype=np.int64)


def best_merged_nmi(truth, est, merges: Sequence[Mapping[int, int]]) -> float:
    """Largest NMI between ``est`` and ``truth`` after any of the given mergings."""
    if not merges:
        return nmi(truth, est)
    return max(nmi(apply_merge(truth, m), est) for m in merges)
