"""Regularized Laplacians, layer aggregation and covariate fusion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .core import CovariateMatrix, MultilayerNetwork, as_covariates, mean_adjacency

METHODS = ("SCANC", "SCALC", "SCAN", "SCAC", "MeanAdj", "SingleLayer")


class SingularLaplacianError(ValueError):
    """tau = 0 together with a node of zero degree."""


@dataclass(frozen=True)
class FusedLaplacian:
    """Symmetric matrix handed to the spectral step, with its provenance."""

    matrix: np.ndarray
    method: str
    alpha: float = 0.0
    tau: float = 0.0
    layer: int | None = None

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")
        m = np.asarray(self.matrix, dtype=float)
        m = symmetrize(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def symmetrize(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2.0


def regularized_laplacian(w, tau: float) -> np.ndarray:
    """(D + tau I)^{-1/2} W (D + tau I)^{-1/2} with D the degree matrix of W."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if sp.issparse(w):
        w = w.toarray()
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise ValueError("adjacency must be nonnegative")
    deg = w.sum(axis=1) + tau
    if np.any(deg <= 0):
        raise SingularLaplacianError("tau = 0 with isolated nodes")
    s = 1.0 / np.sqrt(deg)
    return symmetrize(s[:, None] * w * s[None, :])


def phi_tilde(net: MultilayerNetwork, tau: float) -> np.ndarray:
    """Regularized Laplacian of the mean adjacency matrix."""
    return regularized_laplacian(mean_adjacency(net), tau)


def psi_tilde(net: MultilayerNetwork, tau: float) -> np.ndarray:
    """Average over layers of the squared per-layer regularized Laplacians."""
    out = np.zeros((net.n, net.n))
    for w in net.layers:
        lap = regularized_laplacian(w, tau)
        out += lap @ lap
    return symmetrize(out / net.n_layers)


def covariate_similarity(y, n_layers: int) -> np.ndarray:
    """Y Y^T / L."""
    if n_layers < 1:
        raise ValueError("layer count must be positive")
    y = y.values if isinstance(y, CovariateMatrix) else np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    return symmetrize(y @ y.T) / n_layers


def network_part(net: MultilayerNetwork, method: str, tau: float) -> np.ndarray:
    """Network term of the fused matrix: phi_tilde squared or psi_tilde."""
    if method in ("SCANC", "SCAN"):
        lap = phi_tilde(net, tau)
        return symmetrize(lap @ lap)
    if method == "SCALC":
        return psi_tilde(net, tau)
    raise ValueError(f"no network part for method {method!r}")


def fuse(net_part: np.ndarray, h: np.ndarray, alpha: float) -> np.ndarray:
    """net_part + alpha * h, with both terms precomputed."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    return symmetrize(net_part + alpha * h)


def fuse_scanc(net: MultilayerNetwork, y, alpha: float, tau: float) -> FusedLaplacian:
    cov = as_covariates(y, net.n)
    m = fuse(network_part(net, "SCANC", tau), covariate_similarity(cov, net.n_layers), alpha)
    return FusedLaplacian(m, "SCANC", alpha, tau)


def fuse_scalc(net: MultilayerNetwork, y, alpha: float, tau: float) -> FusedLaplacian:
    cov = as_covariates(y, net.n)
    m = fuse(network_part(net, "SCALC", tau), covariate_similarity(cov, net.n_layers), alpha)
    return FusedLaplacian(m, "SCALC", alpha, tau)
