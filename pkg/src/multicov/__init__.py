"""Spectral community detection on multilayer networks with nodal covariates."""

from .core import (
    CovariateMatrix,
    MultilayerNetwork,
    ValidationError,
    average_degrees,
    degrees,
    mean_adjacency,
    membership_from_labels,
)
from .estimators import SCAC, SCALC, SCAN, SCANC, MeanAdjacencyClustering
from .laplacian import (
    FusedLaplacian,
    covariate_similarity,
    fuse_scalc,
    fuse_scanc,
    phi_tilde,
    psi_tilde,
    regularized_laplacian,
)
from .metrics import best_merged_nmi, misclustering_rate, nmi
from .msbmc import MsbmcModel, SimplifiedParams, expand_simplified, experiment1_model, sample
from .pipeline import (
    ClusterConfig,
    ClusteringResult,
    mean_adj_baseline,
    scac,
    scalc,
    scan,
    scanc,
    single_layer,
)
from .tuning import alpha_range, default_tau, select_alpha

__version__ = "0.1.0"

__all__ = [
    "ClusterConfig",
    "ClusteringResult",
    "CovariateMatrix",
    "FusedLaplacian",
    "MeanAdjacencyClustering",
    "MsbmcModel",
    "MultilayerNetwork",
    "SCAC",
    "SCALC",
    "SCAN",
    "SCANC",
    "SimplifiedParams",
    "ValidationError",
    "alpha_range",
    "average_degrees",
    "best_merged_nmi",
    "covariate_similarity",
    "default_tau",
    "degrees",
    "expand_simplified",
    "experiment1_model",
    "fuse_scalc",
    "fuse_scanc",
    "mean_adj_baseline",
    "mean_adjacency",
    "membership_from_labels",
    "misclustering_rate",
    "nmi",
    "phi_tilde",
    "psi_tilde",
    "regularized_laplacian",
    "sample",
    "scac",
    "scalc",
    "scan",
    "scanc",
    "select_alpha",
    "single_layer",
]
