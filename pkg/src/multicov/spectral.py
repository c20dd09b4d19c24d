"""Leading eigenpairs by magnitude and the spectral embedding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.sparse.linalg import eigsh

from .core import ValidationError

SIGN_THRESHOLD = 1e-12


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray


def check_symmetric(a, tol: float = 1e-8) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max())) if a.size else 1.0
    if a.size and np.abs(a - a.T).max() > tol * scale:
        raise ValidationError("matrix is not symmetric")
    return a


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so that its first entry above 1e-12 in size is positive."""
    out = np.array(vectors, dtype=float, copy=True)
    for j in range(out.shape[1]):
        nz = np.flatnonzero(np.abs(out[:, j]) > SIGN_THRESHOLD)
        if nz.size and out[nz[0], j] < 0:
            out[:, j] = -out[:, j]
    return out


def top_eigenpairs(a, m: int, *, psd: bool = False, solver: str = "dense") -> EigenResult:
    """The ``m`` eigenpairs of a symmetric matrix with the largest ``|lambda|``.

    Pairs are ordered by descending magnitude, ties going to the larger signed
    value. ``psd=True`` lets the dense path skip the bottom of the spectrum,
    which is only valid when the matrix is positive semidefinite.
    ``solver="arpack"`` switches to an implicitly restarted Lanczos iteration
    for large inputs; ``"dense"`` is the reference path.
    """
    a = check_symmetric(a)
    n = a.shape[0]
    if not 1 <= m <= n:
        raise ValidationError(f"cannot take {m} eigenpairs of a {n} x {n} matrix")
    a = (a + a.T) / 2.0

    if solver == "arpack" and m < n - 1:
        v0 = np.ones(n) / np.sqrt(n)
        vals, vecs = eigsh(a, k=m, which="LM", v0=v0, tol=0.0)
    elif solver in ("dense", "arpack"):
        if 2 * m >= n or n <= 64:
            vals, vecs = np.linalg.eigh(a)
        elif psd:
            vals, vecs = sla.eigh(a, subset_by_index=[n - m, n - 1])
        else:
            hi_vals, hi_vecs = sla.eigh(a, subset_by_index=[n - m, n - 1])
            lo_vals, lo_vecs = sla.eigh(a, subset_by_index=[0, m - 1])
            vals = np.concatenate([lo_vals, hi_vals])
            vecs = np.concatenate([lo_vecs, hi_vecs], axis=1)
    else:
        raise ValueError(f"unknown solver {solver!r}")

    order = np.lexsort((-vals, -np.abs(vals)))[:m]
    return EigenResult(values=vals[order], vectors=fix_signs(vecs[:, order]))


def embed(a, k: int, *, psd: bool = False) -> np.ndarray:
    """N x K matrix whose columns are the K leading eigenvectors (no row scaling)."""
    return top_eigenpairs(a, k, psd=psd).vectors
