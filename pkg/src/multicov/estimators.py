"""scikit-learn compatible clusterers wrapping the spectral pipelines.

``fit`` takes the network as ``X`` (a MultilayerNetwork, a list of adjacency
matrices or an (L, N, N) array) and the covariates as a keyword argument.
SCAC is the exception: it clusters covariates alone, so they are its ``X``.
Fitted labels are 1-based, matching the rest of the package.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .core import as_covariates, as_network
from .kmeans import DEFAULT_MAX_ITER, DEFAULT_RESTARTS, DEFAULT_TOL
from .pipeline import ClusterConfig, mean_adj_baseline, scac, scalc, scan, scanc
from .tuning import DEFAULT_GRID_SIZE


class _SpectralClusterer(ClusterMixin, BaseEstimator):
    def __init__(
        self,
        n_clusters: int = 2,
        *,
        tau: float | None = None,
        n_init: int = DEFAULT_RESTARTS,
        max_iter: int = DEFAULT_MAX_ITER,
        tol: float = DEFAULT_TOL,
        random_state: int = 0,
    ):
        self.n_clusters = n_clusters
        self.tau = tau
        self.n_init = n_init
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def _config(self, **extra) -> ClusterConfig:
        return ClusterConfig(
            tau=self.tau,
            seed=int(self.random_state),
            restarts=self.n_init,
            max_iter=self.max_iter,
            tol=self.tol,
            **extra,
        )

    def _store(self, result):
        self.result_ = result
        self.labels_ = result.labels
        self.embedding_ = result.embedding
        self.cluster_centers_ = result.centroids
        self.eigenvalues_ = result.eigenvalues
        self.inertia_ = result.wcss
        self.tau_ = result.tau
        self.alpha_ = result.alpha
        self.alpha_range_ = result.alpha_range
        return self

    def transform(self, X=None):
        """The spectral embedding of the fitted data."""
        check_is_fitted(self, "embedding_")
        return self.embedding_


class _CovariateAssisted(_SpectralClusterer):
    _method = None

    def __init__(
        self,
        n_clusters: int = 2,
        *,
        alpha: float | None = None,
        tau: float | None = None,
        grid_size: int = DEFAULT_GRID_SIZE,
        n_init: int = DEFAULT_RESTARTS,
        max_iter: int = DEFAULT_MAX_ITER,
        tol: float = DEFAULT_TOL,
        random_state: int = 0,
    ):
        super().__init__(
            n_clusters, tau=tau, n_init=n_init, max_iter=max_iter, tol=tol, random_state=random_state
        )
        self.alpha = alpha
        self.grid_size = grid_size

    def fit(self, X, y=None, covariates=None):
        """Cluster the nodes of ``X`` using ``covariates`` (N x R)."""
        if covariates is None:
            raise ValueError(f"{type(self).__name__} needs covariates")
        net = as_network(X)
        cov = as_covariates(covariates, net.n)
        cfg = self._config(alpha=self.alpha, grid_size=self.grid_size)
        return self._store(type(self)._method(net, cov, self.n_clusters, cfg))


class SCANC(_CovariateAssisted):
    """Spectral clustering on the aggregated network plus covariates."""

    _method = staticmethod(scanc)


class SCALC(_CovariateAssisted):
    """Spectral clustering on aggregated squared Laplacians plus covariates.

    Prefer this over SCANC when some layers are disassortative.
    """

    _method = staticmethod(scalc)


class SCAN(_SpectralClusterer):
    """Network-only spectral clustering on the aggregated Laplacian squared."""

    def fit(self, X, y=None):
        return self._store(scan(as_network(X), self.n_clusters, self._config()))


class MeanAdjacencyClustering(_SpectralClusterer):
    def fit(self, X, y=None):
        return self._store(mean_adj_baseline(as_network(X), self.n_clusters, self._config()))


class SCAC(_SpectralClusterer):
    """Spectral clustering on covariates only; ``X`` is the N x R covariate matrix."""

    def fit(self, X, y=None):
        cov = check_array(X, ensure_min_samples=1)
        self._store(scac(cov, self.n_clusters, self._config()))
        self.n_features_in_ = cov.shape[1]
        return self
