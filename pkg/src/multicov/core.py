"""Data model for multilayer networks with nodal covariates.

Nodes are indexed from 0. Layers are addressed 1..L in the public API and
community labels take values 1..K.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class ValidationError(ValueError):
    """Raised when an input violates a structural invariant."""


class MultilayerNetwork:
    """L undirected, unweighted graphs on a shared node set.

    Parameters
    ----------
    layers : sequence of array-like or sparse matrices
        Each layer is an N x N symmetric 0/1 adjacency matrix with an empty
        diagonal. A 3-D array of shape (L, N, N) is also accepted.
    """

    __slots__ = ("_layers", "_n")

    def __init__(self, layers: Iterable):
        if isinstance(layers, np.ndarray) and layers.ndim == 3:
            layers = list(layers)
        mats = [_as_adjacency(w) for w in layers]
        if not mats:
            raise ValidationError("a multilayer network needs at least one layer")
        n = mats[0].shape[0]
        for idx, w in enumerate(mats, start=1):
            if w.shape != (n, n):
                raise ValidationError(
                    f"layer {idx} has shape {w.shape}, expected {(n, n)}"
                )
        self._layers = tuple(mats)
        self._n = n

    @classmethod
    def from_edge_lists(cls, n: int, edge_lists: Sequence[np.ndarray]) -> "MultilayerNetwork":
        """Build from per-layer (E, 2) integer arrays of undirected edges."""
        layers = []
        for edges in edge_lists:
            edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
            if edges.size and (edges.min() < 0 or edges.max() >= n):
                raise ValidationError(f"edge endpoint outside [0, {n})")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValidationError("self-loops are not allowed")
            i = np.concatenate([edges[:, 0], edges[:, 1]])
            j = np.concatenate([edges[:, 1], edges[:, 0]])
            w = sp.coo_matrix((np.ones(i.size), (i, j)), shape=(n, n)).tocsr()
            # duplicated edges collapse to a single 0/1 entry
            w.data[:] = 1.0
            layers.append(w)
        return cls(layers)

    @property
    def n(self) -> int:
        return self._n

    @property
    def n_layers(self) -> int:
        return len(self._layers)

    @property
    def layers(self) -> tuple[sp.csr_matrix, ...]:
        return self._layers

    def layer(self, index: int) -> sp.csr_matrix:
        """Return layer ``index`` (1-based)."""
        if not 1 <= index <= self.n_layers:
            raise IndexError(f"layer {index} outside [1, {self.n_layers}]")
        return self._layers[index - 1]

    def dense_layer(self, index: int) -> np.ndarray:
        return self.layer(index).toarray()

    def edge_list(self, index: int) -> np.ndarray:
        """Edges of layer ``index`` as an (E, 2) array with i < j, sorted."""
        upper = sp.triu(self.layer(index), k=1).tocoo()
        edges = np.column_stack([upper.row, upper.col]).astype(np.int64)
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        return edges[order]

    def subnetwork(self, indices: Sequence[int]) -> "MultilayerNetwork":
        """Network made of the listed layers (1-based)."""
        return MultilayerNetwork([self.layer(i) for i in indices])

    def permute(self, perm: Sequence[int]) -> "MultilayerNetwork":
        """Relabel nodes so that new node ``a`` is old node ``perm[a]``."""
        perm = np.asarray(perm)
        return MultilayerNetwork([w[perm][:, perm] for w in self._layers])

    def __repr__(self) -> str:
        return f"MultilayerNetwork(n={self.n}, n_layers={self.n_layers})"


def _as_adjacency(w) -> sp.csr_matrix:
    if sp.issparse(w):
        w = sp.csr_matrix(w, dtype=float)
    else:
        arr = np.asarray(w, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError(f"adjacency must be square, got shape {arr.shape}")
        w = sp.csr_matrix(arr)
    w.eliminate_zeros()
    if w.shape[0] != w.shape[1]:
        raise ValidationError(f"adjacency must be square, got shape {w.shape}")
    if w.nnz and not np.all(w.data == 1.0):
        raise ValidationError("adjacency entries must be 0 or 1")
    if w.diagonal().any():
        raise ValidationError("self-loops are not allowed")
    if (w != w.T).nnz:
        raise ValidationError("adjacency must be symmetric")
    return w


class CovariateMatrix:
    """N x R real covariates with entries bounded by ``bound`` in magnitude.

    When ``bound`` is omitted the observed maximum absolute entry is used.
    """

    __slots__ = ("_values", "_bound")

    def __init__(self, values, bound: float | None = None):
        y = np.array(values, dtype=float)
        if y.ndim == 1:
            y = y[:, None]
        if y.ndim != 2:
            raise ValidationError(f"covariates must be 2-D, got shape {y.shape}")
        if not np.all(np.isfinite(y)):
            raise ValidationError("covariates must be finite")
        observed = float(np.abs(y).max()) if y.size else 0.0
        if bound is None:
            bound = observed
        if bound < 0:
            raise ValidationError("covariate bound must be nonnegative")
        if observed > bound:
            raise ValidationError(
                f"covariate entry {observed} exceeds the declared bound {bound}"
            )
        y.setflags(write=False)
        self._values = y
        self._bound = float(bound)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def bound(self) -> float:
        return self._bound

    @property
    def n(self) -> int:
        return self._values.shape[0]

    @property
    def r(self) -> int:
        return self._values.shape[1]

    def permute(self, perm: Sequence[int]) -> "CovariateMatrix":
        return CovariateMatrix(self._values[np.asarray(perm)], self._bound)

    def __repr__(self) -> str:
        return f"CovariateMatrix(n={self.n}, r={self.r}, bound={self.bound:g})"


def as_network(x) -> MultilayerNetwork:
    """Coerce a network, a list of adjacency matrices, or an (L, N, N) array."""
    if isinstance(x, MultilayerNetwork):
        return x
    if sp.issparse(x) or (isinstance(x, np.ndarray) and x.ndim == 2):
        return MultilayerNetwork([x])
    return MultilayerNetwork(x)


def as_covariates(y, n: int | None = None) -> CovariateMatrix:
    cov = y if isinstance(y, CovariateMatrix) else CovariateMatrix(y)
    if n is not None and cov.n != n:
        raise ValidationError(f"covariates have {cov.n} rows but the network has {n} nodes")
    return cov


def check_labels(labels, k: int | None = None, *, n: int | None = None) -> np.ndarray:
    """Validate a 1-based label vector and return it as an int64 array."""
    z = np.asarray(labels)
    if z.ndim != 1:
        raise ValidationError("labels must be one-dimensional")
    if z.size and not np.all(np.equal(np.mod(z, 1), 0)):
        raise ValidationError("labels must be integers")
    z = z.astype(np.int64)
    if n is not None and z.size != n:
        raise ValidationError(f"expected {n} labels, got {z.size}")
    if z.size and z.min() < 1:
        raise ValidationError("labels are 1-based")
    if k is not None:
        if k < 1:
            raise ValidationError("K must be at least 1")
        if z.size and z.max() > k:
            raise ValidationError(f"label {z.max()} exceeds K={k}")
    return z


def degrees(net: MultilayerNetwork, layer: int) -> np.ndarray:
    """Degree vector of one layer (1-based index)."""
    return np.asarray(net.layer(layer).sum(axis=1)).ravel().astype(np.int64)


def mean_adjacency(net: MultilayerNetwork) -> np.ndarray:
    """Dense average of the adjacency matrices over layers."""
    total = net.layers[0].toarray()
    for w in net.layers[1:]:
        total += w.toarray()
    return total / net.n_layers


def average_degrees(net: MultilayerNetwork) -> np.ndarray:
    """Row sums of the mean adjacency, i.e. degrees averaged over layers."""
    total = np.zeros(net.n)
    for w in net.layers:
        total += np.asarray(w.sum(axis=1)).ravel()
    return total / net.n_layers


def membership_from_labels(labels, k: int | None = None) -> np.ndarray:
    """N x K 0/1 matrix with a single 1 per row at column ``labels[i]``."""
    z = check_labels(labels, k)
    if k is None:
        k = int(z.max()) if z.size else 1
    out = np.zeros((z.size, k))
    out[np.arange(z.size), z - 1] = 1.0
    return out


def labels_from_membership(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z)
    if z.ndim != 2 or not np.all((z == 0) | (z == 1)) or not np.all(z.sum(axis=1) == 1):
        raise ValidationError("membership matrix needs exactly one 1 per row")
    return np.argmax(z, axis=1).astype(np.int64) + 1
