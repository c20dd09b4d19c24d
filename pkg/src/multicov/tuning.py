"""Data-driven choice of the regularizer tau and the covariate weight alpha."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .core import MultilayerNetwork, as_covariates, average_degrees
from .kmeans import DEFAULT_MAX_ITER, DEFAULT_RESTARTS, DEFAULT_TOL, KMeansResult, kmeans
from .laplacian import covariate_similarity, fuse, network_part
from .spectral import top_eigenpairs

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 20


class DegenerateCovariatesError(ValueError):
    """The covariate similarity matrix is zero."""


class UnboundedAlphaRangeError(ValueError):
    """The denominator of alpha_max vanishes."""


@dataclass(frozen=True)
class AlphaRange:
    alpha_min: float
    alpha_max: float
    net_eigenvalues: tuple[float, ...]
    cov_eigenvalues: tuple[float, ...]
    k: int
    r: int
    swapped: bool = False
    clamped: bool = False


def default_tau(net: MultilayerNetwork) -> float:
    """Average over nodes of the layer-averaged degree."""
    return float(np.mean(average_degrees(net)))


def _eig_at(values: np.ndarray, index: int) -> float:
    # 1-based index into magnitude-ordered eigenvalues; beyond the rank it is 0
    return float(values[index - 1]) if index <= values.size else 0.0


def alpha_range_from_eigenvalues(net_vals, cov_vals, k: int, r: int) -> AlphaRange:
    """Interval of alpha values from precomputed leading eigenvalues.

    ``net_vals`` needs entries up to index K+1; ``cov_vals`` up to
    ``max(min(R, K), K+1)``. Missing trailing entries are read as zero.
    """
    net_vals = np.asarray(net_vals, dtype=float)
    cov_vals = np.asarray(cov_vals, dtype=float)
    lam1_h = _eig_at(cov_vals, 1)
    if lam1_h <= 0:
        raise DegenerateCovariatesError("covariate similarity has no positive eigenvalue")
    alpha_min = (_eig_at(net_vals, k) - _eig_at(net_vals, k + 1)) / lam1_h
    if r <= k:
        denom = _eig_at(cov_vals, r)
    else:
        denom = _eig_at(cov_vals, k) - _eig_at(cov_vals, k + 1)
    if abs(denom) <= 1e-12 * lam1_h:
        raise UnboundedAlphaRangeError("alpha_max denominator is zero")
    alpha_max = _eig_at(net_vals, 1) / denom

    clamped = swapped = False
    if alpha_min < 0:
        alpha_min, clamped = 0.0, True
    if alpha_max < alpha_min:
        logger.warning("alpha_min %g exceeds alpha_max %g; swapping", alpha_min, alpha_max)
        alpha_min, alpha_max, swapped = alpha_max, alpha_min, True
    return AlphaRange(
        alpha_min=alpha_min,
        alpha_max=alpha_max,
        net_eigenvalues=tuple(net_vals.tolist()),
        cov_eigenvalues=tuple(cov_vals.tolist()),
        k=k,
        r=r,
        swapped=swapped,
        clamped=clamped,
    )


def alpha_range(net_part: np.ndarray, h: np.ndarray, k: int, r: int) -> AlphaRange:
    """Alpha interval for fused matrix ``net_part + alpha * h``.

    ``net_part`` is phi_tilde squared for SCANC or psi_tilde for SCALC.
    """
    n = net_part.shape[0]
    m_net = min(k + 1, n)
    m_cov = min(max(min(r, k), k + 1), n)
    net_vals = top_eigenpairs(net_part, m_net, psd=True).values
    cov_vals = top_eigenpairs(h, m_cov, psd=True).values
    return alpha_range_from_eigenvalues(net_vals, cov_vals, k, r)


def alpha_grid(rng: AlphaRange, grid_size: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    """Log-spaced candidates over the range, endpoints included."""
    lo, hi = rng.alpha_min, rng.alpha_max
    if hi <= 0:
        return np.array([lo])
    if lo == hi:
        return np.array([lo])
    if grid_size < 2:
        return np.array([lo])
    if lo <= 0:
        # a vanishing spectral gap: keep 0 and cover three decades below alpha_max
        return np.concatenate([[0.0], np.geomspace(hi * 1e-3, hi, grid_size - 1)])
    return np.geomspace(lo, hi, grid_size)


@dataclass(frozen=True)
class AlphaSelection:
    alpha: float
    result: KMeansResult
    embedding: np.ndarray
    eigenvalues: np.ndarray
    alpha_range: AlphaRange | None
    grid: np.ndarray
    wcss: np.ndarray = field(repr=False)
    fallback: bool = False


def select_alpha_from_parts(
    net_part: np.ndarray,
    h: np.ndarray,
    k: int,
    r: int,
    seed: int = 0,
    grid_size: int = DEFAULT_GRID_SIZE,
    restarts: int = DEFAULT_RESTARTS,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> AlphaSelection:
    """Scan the alpha grid and keep the value with the smallest k-means WCSS."""
    fallback = False
    try:
        rng = alpha_range(net_part, h, k, r)
        grid = alpha_grid(rng, grid_size)
    except UnboundedAlphaRangeError:
        n = net_part.shape[0]
        net_vals = top_eigenpairs(net_part, min(k + 1, n), psd=True).values
        lam1_h = top_eigenpairs(h, 1, psd=True).values[0]
        if lam1_h <= 0:
            raise DegenerateCovariatesError("covariate similarity has no positive eigenvalue")
        lo = max((_eig_at(net_vals, k) - _eig_at(net_vals, k + 1)) / lam1_h, 0.0)
        rng, fallback = None, True
        grid = np.geomspace(lo, 100 * lo, grid_size) if lo > 0 else np.array([0.0])

    n = net_part.shape[0]
    m = min(k + 1, n)
    best = None
    scores = np.empty(grid.size)
    for idx, alpha in enumerate(grid):
        eig = top_eigenpairs(fuse(net_part, h, float(alpha)), m, psd=True)
        xi = eig.vectors[:, :k]
        km = kmeans(xi, k, seed=seed, restarts=restarts, max_iter=max_iter, tol=tol)
        scores[idx] = km.wcss
        # strict inequality keeps the smaller alpha on ties
        if best is None or km.wcss < best[1].wcss:
            best = (float(alpha), km, xi, eig.values)
    alpha, km, xi, vals = best
    return AlphaSelection(
        alpha=alpha,
        result=km,
        embedding=xi,
        eigenvalues=vals,
        alpha_range=rng,
        grid=grid,
        wcss=scores,
        fallback=fallback,
    )


def select_alpha(
    net: MultilayerNetwork,
    y,
    method: str,
    k: int,
    tau: float,
    seed: int = 0,
    grid_size: int = DEFAULT_GRID_SIZE,
    **kmeans_options,
) -> AlphaSelection:
    """Choose alpha for ``method`` in {"SCANC", "SCALC"} on observed data."""
    if method not in ("SCANC", "SCALC"):
        raise ValueError(f"alpha selection applies to SCANC or SCALC, not {method!r}")
    cov = as_covariates(y, net.n)
    return select_alpha_from_parts(
        network_part(net, method, tau),
        covariate_similarity(cov, net.n_layers),
        k,
        cov.r,
        seed=seed,
        grid_size=grid_size,
        **kmeans_options,
    )
