"""Spectral clustering entry points: eigenvectors of a fused matrix, then k-means."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .core import MultilayerNetwork, as_covariates, as_network, mean_adjacency
from .kmeans import DEFAULT_MAX_ITER, DEFAULT_RESTARTS, DEFAULT_TOL, kmeans
from .laplacian import covariate_similarity, fuse, network_part
from .spectral import top_eigenpairs
from .tuning import DEFAULT_GRID_SIZE, AlphaRange, default_tau, select_alpha_from_parts


@dataclass(frozen=True)
class ClusterConfig:
    """Run settings shared by every method.

    ``tau`` and ``alpha`` default to the data-driven choices when left as None.
    """

    tau: float | None = None
    alpha: float | None = None
    seed: int = 0
    restarts: int = DEFAULT_RESTARTS
    max_iter: int = DEFAULT_MAX_ITER
    tol: float = DEFAULT_TOL
    grid_size: int = DEFAULT_GRID_SIZE

    def kmeans_options(self) -> dict:
        return {"restarts": self.restarts, "max_iter": self.max_iter, "tol": self.tol}


@dataclass(frozen=True)
class ClusteringResult:
    labels: np.ndarray
    method: str
    alpha: float
    tau: float
    eigenvalues: np.ndarray
    wcss: float
    seed: int
    runtime_ms: float
    embedding: np.ndarray = field(repr=False)
    centroids: np.ndarray = field(repr=False)
    alpha_range: AlphaRange | None = None
    layer: int | None = None

    def record(self) -> dict:
        """JSON-ready provenance of the run."""
        out = {
            "method": self.method,
            "alpha": self.alpha,
            "tau": self.tau,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "wcss": self.wcss,
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
            "n": int(self.labels.size),
            "k": int(self.centroids.shape[0]),
        }
        if self.layer is not None:
            out["layer"] = self.layer
        if self.alpha_range is not None:
            out["alpha_min"] = self.alpha_range.alpha_min
            out["alpha_max"] = self.alpha_range.alpha_max
            if self.alpha_range.swapped:
                out["alpha_range_swapped"] = True
        return out


def _cluster_matrix(a, k, method, alpha, tau, config, start, *, psd, layer=None):
    m = min(k + 1, a.shape[0])
    eig = top_eigenpairs(a, m, psd=psd)
    xi = eig.vectors[:, :k]
    km = kmeans(xi, k, seed=config.seed, **config.kmeans_options())
    return ClusteringResult(
        labels=km.labels,
        method=method,
        alpha=float(alpha),
        tau=float(tau),
        eigenvalues=eig.values,
        wcss=km.wcss,
        seed=config.seed,
        runtime_ms=(time.perf_counter() - start) * 1e3,
        embedding=xi,
        centroids=km.centroids,
        layer=layer,
    )


def _with_covariates(method, net, y, k, config, layer=None):
    start = time.perf_counter()
    net = as_network(net)
    cov = as_covariates(y, net.n)
    tau = default_tau(net) if config.tau is None else config.tau
    net_part = network_part(net, method, tau)
    h = covariate_similarity(cov, net.n_layers)
    if config.alpha is not None:
        return _cluster_matrix(
            fuse(net_part, h, config.alpha), k, method, config.alpha, tau, config, start,
            psd=True, layer=layer,
        )
    sel = select_alpha_from_parts(
        net_part, h, k, cov.r, seed=config.seed, grid_size=config.grid_size,
        **config.kmeans_options(),
    )
    return ClusteringResult(
        labels=sel.result.labels,
        method=method,
        alpha=sel.alpha,
        tau=float(tau),
        eigenvalues=sel.eigenvalues,
        wcss=sel.result.wcss,
        seed=config.seed,
        runtime_ms=(time.perf_counter() - start) * 1e3,
        embedding=sel.embedding,
        centroids=sel.result.centroids,
        alpha_range=sel.alpha_range,
        layer=layer,
    )


def scanc(net, y, k: int, config: ClusterConfig = ClusterConfig()) -> ClusteringResult:
    """Cluster on phi_tilde^2 + alpha * H_tilde (aggregate the adjacency first)."""
    return _with_covariates("SCANC", net, y, k, config)


def scalc(net, y, k: int, config: ClusterConfig = ClusterConfig()) -> ClusteringResult:
    """Cluster on psi_tilde + alpha * H_tilde (aggregate squared Laplacians)."""
    return _with_covariates("SCALC", net, y, k, config)


def scan(net, k: int, config: ClusterConfig = ClusterConfig()) -> ClusteringResult:
    """Network-only clustering on phi_tilde^2."""
    start = time.perf_counter()
    net = as_network(net)
    tau = default_tau(net) if config.tau is None else config.tau
    return _cluster_matrix(network_part(net, "SCAN", tau), k, "SCAN", 0.0, tau, config, start, psd=True)


def scac(y, k: int, config: ClusterConfig = ClusterConfig(), n_layers: int = 1) -> ClusteringResult:
    """Covariate-only clustering on Y Y^T / L."""
    start = time.perf_counter()
    cov = as_covariates(y)
    h = covariate_similarity(cov, n_layers)
    return _cluster_matrix(h, k, "SCAC", 0.0, 0.0, config, start, psd=True)


def mean_adj_baseline(net, k: int, config: ClusterConfig = ClusterConfig()) -> ClusteringResult:
    """Clustering on the raw mean adjacency matrix, no normalization."""
    start = time.perf_counter()
    net = as_network(net)
    return _cluster_matrix(mean_adjacency(net), k, "MeanAdj", 0.0, 0.0, config, start, psd=False)


def single_layer(
    net, y, layer: int, k: int, config: ClusterConfig = ClusterConfig()
) -> ClusteringResult:
    """Covariate-assisted clustering on one layer (1-based) of the network.

    With one layer the SCANC and SCALC matrices coincide. ``y`` should hold the
    covariates that belong to this layer; pass None for a network-only run.
    """
    net = as_network(net)
    sub = MultilayerNetwork([net.layer(layer)])
    if y is None:
        res = scan(sub, k, config)
    else:
        res = _with_covariates("SCANC", sub, y, k, config)
    return replace(res, method="SingleLayer", layer=layer)


def run_method(method: str, net, y, k: int, config: ClusterConfig = ClusterConfig(), *,
               layer: int | None = None, layer_covariates=None) -> ClusteringResult:
    """Dispatch by method name; used by the CLI and experiment sweeps."""
    if method == "SCANC":
        return scanc(net, _need(y, method), k, config)
    if method == "SCALC":
        return scalc(net, _need(y, method), k, config)
    if method == "SCAN":
        return scan(net, k, config)
    if method == "SCAC":
        net = as_network(net) if net is not None else None
        return scac(_need(y, method), k, config, n_layers=net.n_layers if net is not None else 1)
    if method == "MeanAdj":
        return mean_adj_baseline(net, k, config)
    if method == "SingleLayer":
        if layer is None:
            raise ValueError("SingleLayer needs a layer index")
        return single_layer(net, layer_covariates, layer, k, config)
    raise ValueError(f"unknown method {method!r}")


class MissingCovariatesError(ValueError):
    """A covariate-based method was asked to run without covariates."""


def _need(y, method):
    if y is None:
        raise MissingCovariatesError(f"{method} requires covariates")
    return y


__all__ = [
    "ClusterConfig",
    "ClusteringResult",
    "MissingCovariatesError",
    "mean_adj_baseline",
    "run_method",
    "scac",
    "scalc",
    "scan",
    "scanc",
    "single_layer",
]
