"""Multilayer stochastic blockmodel with covariates: sampling and population matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    CovariateMatrix,
    MultilayerNetwork,
    ValidationError,
    check_labels,
    membership_from_labels,
)
from .laplacian import regularized_laplacian, symmetrize

DEFAULT_BOUND = 10.0


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class MsbmcModel:
    """Block matrices per layer, community covariate means and block sizes.

    ``covariate_layer`` optionally ties covariate column r to a layer (1-based);
    such columns follow that layer's labels when labels vary across layers.
    Covariate noise is Gaussian with standard deviation ``noise_sd``, clamped
    to ``[-bound, bound]``.
    """

    b: np.ndarray
    m: np.ndarray
    community_sizes: tuple[int, ...]
    bound: float = DEFAULT_BOUND
    noise_sd: float = 1.0
    covariate_layer: tuple[int, ...] | None = None

    def __post_init__(self):
        b = np.array(self.b, dtype=float)
        if b.ndim == 2:
            b = b[None]
        m = np.array(self.m, dtype=float)
        if m.ndim == 1:
            m = m[:, None]
        sizes = tuple(int(s) for s in self.community_sizes)
        k = len(sizes)
        if b.ndim != 3 or b.shape[1:] != (k, k):
            raise ValidationError(f"block matrices must be L x {k} x {k}, got {b.shape}")
        if np.any(b < 0) or np.any(b > 1):
            raise ValidationError("block probabilities must lie in [0, 1]")
        if not np.allclose(b, np.transpose(b, (0, 2, 1)), atol=0, rtol=0):
            raise ValidationError("block matrices must be symmetric")
        if m.shape[0] != k:
            raise ValidationError(f"mean covariate matrix needs {k} rows, got {m.shape[0]}")
        if np.any(np.abs(m) > self.bound):
            raise ValidationError("mean covariates exceed the bound")
        if any(s < 1 for s in sizes):
            raise ValidationError("community sizes must be positive")
        if self.covariate_layer is not None:
            cl = tuple(int(x) for x in self.covariate_layer)
            if len(cl) != m.shape[1] or any(not 1 <= x <= b.shape[0] for x in cl):
                raise ValidationError("covariate_layer must give a valid layer per column")
            object.__setattr__(self, "covariate_layer", cl)
        b.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "community_sizes", sizes)

    @property
    def n(self) -> int:
        return sum(self.community_sizes)

    @property
    def k(self) -> int:
        return len(self.community_sizes)

    @property
    def n_layers(self) -> int:
        return self.b.shape[0]

    @property
    def r(self) -> int:
        return self.m.shape[1]

    def block_labels(self) -> np.ndarray:
        """Labels in block order: the first community first."""
        return np.repeat(np.arange(1, self.k + 1), self.community_sizes)

    def covariate_blocks(self) -> list[list[int]] | None:
        """Column indices of the covariates tied to each layer."""
        if self.covariate_layer is None:
            return None
        return [
            [r for r, lay in enumerate(self.covariate_layer) if lay == layer]
            for layer in range(1, self.n_layers + 1)
        ]


@dataclass(frozen=True)
class SimplifiedParams:
    """Equal-size communities, within/between probabilities p(l), q(l).

    The mean covariate of community k in column r is ``m1`` when r and k agree
    modulo K (both 1-based) and ``m2`` otherwise.
    """

    p: tuple[float, ...]
    q: tuple[float, ...]
    m1: float
    m2: float
    r: int
    k: int
    n: int
    bound: float = DEFAULT_BOUND
    noise_sd: float = 1.0

    def __post_init__(self):
        p = tuple(float(x) for x in np.atleast_1d(self.p))
        q = tuple(float(x) for x in np.atleast_1d(self.q))
        if len(p) != len(q) or not p:
            raise ValidationError("p and q need the same positive length")
        if self.k < 1 or self.n % self.k or self.r % self.k or self.r < 1:
            raise ValidationError("N and R must be positive multiples of K")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n_layers(self) -> int:
        return len(self.p)


def expand_simplified(sp: SimplifiedParams) -> MsbmcModel:
    k = sp.k
    b = np.stack([(p - q) * np.eye(k) + q * np.ones((k, k)) for p, q in zip(sp.p, sp.q)])
    kk = np.arange(1, k + 1)[:, None]
    rr = np.arange(1, sp.r + 1)[None, :]
    m = np.where((rr - kk) % k == 0, sp.m1, sp.m2)
    return MsbmcModel(
        b=b, m=m, community_sizes=(sp.n // k,) * k, bound=sp.bound, noise_sd=sp.noise_sd
    )


def experiment1_model(variant: str, n: int, bound: float = DEFAULT_BOUND) -> MsbmcModel:
    """Five layers, three equal communities; ``variant`` is "B1" or "B2".

    B1 is assortative on every layer. B2 keeps the within-block probability at
    0.045 while the between-block one grows as 0.01 l, so layer 5 is
    disassortative. Layer l contributes three covariate columns whose mean is
    (-0.4 + 0.3 l) on the node's own community coordinate.
    """
    k, n_layers = 3, 5
    if n % k:
        raise ValidationError("N must be a multiple of 3")
    blocks = []
    for layer in range(1, n_layers + 1):
        if variant == "B1":
            diag, off = 0.005 * layer + 0.015, 0.015
        elif variant == "B2":
            diag, off = 0.045, 0.01 * layer
        else:
            raise ValueError(f"unknown variant {variant!r}")
        blocks.append((diag - off) * np.eye(k) + off * np.ones((k, k)))
    m = np.zeros((k, k * n_layers))
    for layer in range(1, n_layers + 1):
        m[:, k * (layer - 1) : k * layer] = (-0.4 + 0.3 * layer) * np.eye(k)
    return MsbmcModel(
        b=np.stack(blocks),
        m=m,
        community_sizes=(n // k,) * k,
        bound=bound,
        covariate_layer=tuple(np.repeat(np.arange(1, n_layers + 1), k)),
    )


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def _sample_layer(prob: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n = prob.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < prob[iu, ju]
    return np.column_stack([iu[keep], ju[keep]])


def sample(
    model: MsbmcModel,
    seed: int,
    *,
    shuffle: bool = False,
    layer_labels: np.ndarray | None = None,
) -> tuple[MultilayerNetwork, CovariateMatrix, np.ndarray]:
    """Draw a network, covariates and the true labels.

    Labels follow block order unless ``shuffle``. ``layer_labels`` (L x N)
    replaces the labels used to draw each layer and the covariate columns tied
    to it; the returned labels are still the overall ones.
    """
    rng = _rng(seed)
    z = model.block_labels()
    if shuffle:
        z = z[rng.permutation(z.size)]
    if layer_labels is None:
        per_layer = np.tile(z, (model.n_layers, 1))
    else:
        per_layer = np.asarray(layer_labels, dtype=np.int64)
        if per_layer.shape != (model.n_layers, model.n):
            raise ValidationError("layer_labels must be L x N")

    edges = []
    for lay in range(model.n_layers):
        zl = per_layer[lay] - 1
        edges.append(_sample_layer(model.b[lay][np.ix_(zl, zl)], rng))
    net = MultilayerNetwork.from_edge_lists(model.n, edges)

    mean = model.m[z - 1]
    if model.covariate_layer is not None:
        for col, lay in enumerate(model.covariate_layer):
            mean[:, col] = model.m[per_layer[lay - 1] - 1, col]
    noise = rng.standard_normal(mean.shape) * model.noise_sd
    y = np.clip(mean + noise, -model.bound, model.bound)
    return net, CovariateMatrix(y, model.bound), z


def misspecify_labels(labels, q_rate: float, n_layers: int, seed: int, k: int | None = None) -> np.ndarray:
    """Per-layer copies of ``labels`` where each entry moves with probability q.

    A moved label is drawn uniformly from the other K - 1 communities.
    Returns an L x N array.
    """
    if not 0 <= q_rate < 1:
        raise ValueError("mis-specification rate must lie in [0, 1)")
    z = check_labels(labels, k)
    k = int(z.max()) if k is None else k
    rng = _rng(seed)
    out = np.tile(z, (n_layers, 1))
    if k < 2:
        return out
    flip = rng.random(out.shape) < q_rate
    shift = rng.integers(1, k, size=out.shape)
    moved = (out - 1 + shift) % k + 1
    return np.where(flip, moved, out)


@dataclass(frozen=True)
class PopulationMatrices:
    phi_star_sq: np.ndarray
    psi_star: np.ndarray
    h_star: np.ndarray
    alpha: float
    tau: float
    phi_star: np.ndarray = field(repr=False)

    @property
    def scanc(self) -> np.ndarray:
        return symmetrize(self.phi_star_sq + self.alpha * self.h_star)

    @property
    def scalc(self) -> np.ndarray:
        return symmetrize(self.psi_star + self.alpha * self.h_star)


def population_matrices(model: MsbmcModel, tau: float, alpha: float) -> PopulationMatrices:
    """Expected-value versions of the fused matrices.

    Degrees are row sums of Z B Z^T, diagonal included. The covariate part is
    E[Y Y^T] / L = ((Z M)(Z M)^T + R sd^2 I) / L, ignoring the clamp.
    """
    z = membership_from_labels(model.block_labels(), model.k)
    b_mean = model.b.mean(axis=0)
    phi = regularized_laplacian(z @ b_mean @ z.T, tau)
    psi = np.zeros((model.n, model.n))
    for b in model.b:
        lap = regularized_laplacian(z @ b @ z.T, tau)
        psi += lap @ lap
    psi = symmetrize(psi / model.n_layers)
    zm = z @ model.m
    h = (zm @ zm.T + model.r * model.noise_sd**2 * np.eye(model.n)) / model.n_layers
    return PopulationMatrices(
        phi_star_sq=symmetrize(phi @ phi),
        psi_star=psi,
        h_star=symmetrize(h),
        alpha=float(alpha),
        tau=float(tau),
        phi_star=phi,
    )


def kth_eigenvalue_bounds(sp: SimplifiedParams, tau: float, alpha: float) -> tuple[float, float]:
    """Lower bounds on the K-th eigenvalue of the population SCANC and SCALC matrices.

    Requires p(l) + (K - 1) q(l) to be the same for every layer. The
    covariate term assumes the all-ones direction carries at least as much
    covariate signal as the contrasts, e.g. m1 >= m2 >= 0.
    """
    p, q = np.asarray(sp.p), np.asarray(sp.q)
    c = p + (sp.k - 1) * q
    if np.ptp(c) > 1e-12:
        raise PreconditionError("p(l) + (K-1) q(l) must not depend on the layer")
    denom = (c[0] + sp.k * tau / sp.n) ** 2
    cov = alpha * sp.r * sp.n * (sp.m1 - sp.m2) ** 2 / (sp.n_layers * sp.k**2)
    scanc = np.mean(p - q) ** 2 / denom + cov
    scalc = np.mean((p - q) ** 2) / denom + cov
    return float(scanc), float(scalc)
