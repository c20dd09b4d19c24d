"""Lloyd's k-means with k-means++ seeding and seeded restarts.

Random streams come from numpy's PCG64 bit generator. Restart ``r`` of a run
seeded with ``s`` draws from the ``r``-th child of ``SeedSequence(s)``, so each
restart is reproducible on its own and independent of the restart count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ValidationError

DEFAULT_RESTARTS = 20
DEFAULT_MAX_ITER = 100
DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    wcss: float
    restarts_used: int
    iterations: int
    wcss_history: tuple[float, ...] = field(default=(), repr=False)


def wcss_of(points, labels, centroids) -> float:
    """Within-cluster sum of squares for 1-based ``labels``."""
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    c = np.asarray(centroids, dtype=float)
    if c.ndim == 1:
        c = c[:, None]
    z = np.asarray(labels, dtype=np.int64) - 1
    return float(np.sum((x - c[z]) ** 2))


def _sq_dists(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def _plusplus(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    idx = [int(rng.integers(n))]
    closest = ((x - x[idx[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=closest / total))
        else:
            nxt = int(rng.integers(n))
        idx.append(nxt)
        closest = np.minimum(closest, ((x - x[nxt]) ** 2).sum(axis=1))
    return x[idx].copy()


def _assign(x: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = _sq_dists(x, centers)
    lab = np.argmin(d, axis=1)
    return lab, d[np.arange(x.shape[0]), lab]


def _repair(x: np.ndarray, lab: np.ndarray, centers: np.ndarray, k: int) -> np.ndarray:
    """Move the point farthest from its centroid into each empty cluster."""
    lab = lab.copy()
    for c in range(k):
        counts = np.bincount(lab, minlength=k)
        if counts[c] > 0:
            continue
        dist = ((x - centers[lab]) ** 2).sum(axis=1)
        # only take from clusters that keep at least one member
        dist[counts[lab] <= 1] = -1.0
        far = int(np.argmax(dist))
        lab[far] = c
        centers[c] = x[far]
    return lab


def _means(x: np.ndarray, lab: np.ndarray, k: int) -> np.ndarray:
    counts = np.bincount(lab, minlength=k).astype(float)
    sums = np.zeros((k, x.shape[1]))
    np.add.at(sums, lab, x)
    return sums / counts[:, None]


def _lloyd(x, k, rng, max_iter, tol):
    centers = _plusplus(x, k, rng)
    lab, _ = _assign(x, centers)
    lab = _repair(x, lab, centers, k)
    history = []
    it = 0
    for it in range(1, max_iter + 1):
        new_centers = _means(x, lab, k)
        shift = np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max()
        centers = new_centers
        history.append(wcss_of(x, lab + 1, centers))
        if shift < tol:
            break
        new_lab, _ = _assign(x, centers)
        new_lab = _repair(x, new_lab, centers, k)
        if np.array_equal(new_lab, lab):
            break
        lab = new_lab
    centers = _means(x, lab, k)
    return lab, centers, wcss_of(x, lab + 1, centers), it, history


def _canonical(lab: np.ndarray, centers: np.ndarray, k: int):
    """Rename clusters in order of first appearance along the node index."""
    _, first = np.unique(lab, return_index=True)
    seen = lab[np.sort(first)]
    order = list(seen) + [c for c in range(k) if c not in set(seen)]
    rename = np.empty(k, dtype=np.int64)
    rename[order] = np.arange(k)
    return rename[lab], centers[order]


def kmeans(
    points,
    k: int,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> KMeansResult:
    """Best-of-``restarts`` k-means on the rows of ``points``.

    Returns 1-based labels. The restart with the lowest WCSS wins, earliest
    restart first on ties.
    """
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if k < 1 or k > n:
        raise ValidationError(f"k={k} must lie in [1, {n}]")
    if restarts < 1:
        raise ValidationError("restarts must be at least 1")

    best = None
    for r, child in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        rng = np.random.Generator(np.random.PCG64(child))
        lab, centers, wcss, it, hist = _lloyd(x, k, rng, max_iter, tol)
        if best is None or wcss < best[2]:
            best = (lab, centers, wcss, it, hist)
    lab, centers, wcss, it, hist = best
    lab, centers = _canonical(lab, centers, k)
    return KMeansResult(
        labels=lab + 1,
        centroids=centers,
        wcss=wcss,
        restarts_used=restarts,
        iterations=it,
        wcss_history=tuple(hist),
    )
