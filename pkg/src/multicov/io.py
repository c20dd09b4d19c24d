"""On-disk dataset format.

A dataset directory holds ``manifest.json`` plus CSV files:

* one edge list per layer, header ``i,j``, one undirected edge per line with
  ``i < j``, nodes numbered from 0;
* optional covariates, header ``y0,...,y{R-1}``, N rows, 17 significant digits;
* optional labels, header ``label``, 1-based integers.

The manifest records ``name``, ``n``, ``layer_files``, ``covariate_file``,
``label_file`` (paths relative to the manifest) and, optionally,
``covariate_blocks``: the covariate columns that belong to each layer.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import CovariateMatrix, MultilayerNetwork, ValidationError, check_labels


@dataclass(frozen=True)
class DatasetManifest:
    n: int
    layer_files: tuple[str, ...]
    covariate_file: str | None = None
    label_file: str | None = None
    name: str = ""
    covariate_blocks: tuple[tuple[int, ...], ...] | None = None
    covariate_bound: float | None = None

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "n": self.n,
            "layer_files": list(self.layer_files),
            "covariate_file": self.covariate_file,
            "label_file": self.label_file,
        }
        if self.covariate_blocks is not None:
            out["covariate_blocks"] = [list(b) for b in self.covariate_blocks]
        if self.covariate_bound is not None:
            out["covariate_bound"] = self.covariate_bound
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DatasetManifest":
        try:
            n = int(data["n"])
            layers = tuple(data["layer_files"])
        except KeyError as exc:
            raise ValidationError(f"manifest is missing {exc.args[0]!r}") from None
        blocks = data.get("covariate_blocks")
        return cls(
            n=n,
            layer_files=layers,
            covariate_file=data.get("covariate_file"),
            label_file=data.get("label_file"),
            name=data.get("name", ""),
            covariate_blocks=None if blocks is None else tuple(tuple(int(c) for c in b) for b in blocks),
            covariate_bound=data.get("covariate_bound"),
        )


@dataclass(frozen=True)
class Dataset:
    manifest: DatasetManifest
    network: MultilayerNetwork
    covariates: CovariateMatrix | None
    labels: np.ndarray | None

    def layer_covariates(self, layer: int) -> np.ndarray | None:
        """Covariate columns tied to ``layer`` (1-based), or all of them."""
        if self.covariates is None:
            return None
        blocks = self.manifest.covariate_blocks
        if blocks is None:
            return self.covariates.values
        return self.covariates.values[:, list(blocks[layer - 1])]


def write_edges(path: Path, edges: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "j"])
        w.writerows((int(i), int(j)) for i, j in edges)


def read_edges(path: Path, n: int | None = None) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["i", "j"]:
        raise ValidationError(f"{path}: expected header 'i,j'")
    edges = np.array([[int(a), int(b)] for a, b in rows[1:]], dtype=np.int64).reshape(-1, 2)
    if edges.size:
        if np.any(edges[:, 0] >= edges[:, 1]):
            raise ValidationError(f"{path}: every edge needs i < j")
        if edges.min() < 0 or (n is not None and edges.max() >= n):
            raise ValidationError(f"{path}: node index outside [0, {n})")
    return edges


def write_covariates(path: Path, y) -> None:
    values = y.values if isinstance(y, CovariateMatrix) else np.asarray(y, dtype=float)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"y{r}" for r in range(values.shape[1])])
        w.writerows([format(v, ".17g") for v in row] for row in values)


def read_covariates(path: Path, bound: float | None = None) -> CovariateMatrix:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValidationError(f"{path}: empty covariate file")
    header = [c.strip() for c in rows[0]]
    if header != [f"y{r}" for r in range(len(header))]:
        raise ValidationError(f"{path}: expected header y0..y{{R-1}}")
    values = np.array([[float(v) for v in row] for row in rows[1:]], dtype=float)
    return CovariateMatrix(values.reshape(-1, len(header)), bound)


def write_labels(path: Path, labels) -> None:
    z = check_labels(labels)
    with open(path, "w", newline="") as fh:
        fh.write("label\n")
        fh.writelines(f"{int(v)}\n" for v in z)


def read_labels(path: Path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["label"]:
        raise ValidationError(f"{path}: expected header 'label'")
    return check_labels([int(r[0]) for r in rows[1:]])


def write_dataset(
    directory,
    network: MultilayerNetwork,
    covariates=None,
    labels=None,
    *,
    name: str = "",
    covariate_blocks=None,
) -> Path:
    """Write every component of a dataset and return the manifest path."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    layer_files = []
    for layer in range(1, network.n_layers + 1):
        fname = f"layer_{layer}.csv"
        write_edges(out / fname, network.edge_list(layer))
        layer_files.append(fname)
    cov_file = label_file = None
    bound = None
    if covariates is not None:
        cov_file = "covariates.csv"
        write_covariates(out / cov_file, covariates)
        if isinstance(covariates, CovariateMatrix):
            bound = covariates.bound
    if labels is not None:
        label_file = "labels.csv"
        write_labels(out / label_file, labels)
    manifest = DatasetManifest(
        n=network.n,
        layer_files=tuple(layer_files),
        covariate_file=cov_file,
        label_file=label_file,
        name=name,
        covariate_blocks=None if covariate_blocks is None else tuple(tuple(b) for b in covariate_blocks),
        covariate_bound=bound,
    )
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest.to_json(), indent=2) + "\n")
    return path


def read_dataset(manifest_path) -> Dataset:
    path = Path(manifest_path)
    if path.is_dir():
        path = path / "manifest.json"
    manifest = DatasetManifest.from_json(json.loads(path.read_text()))
    base = path.parent
    for rel in manifest.layer_files + tuple(
        f for f in (manifest.covariate_file, manifest.label_file) if f
    ):
        if not (base / rel).exists():
            raise ValidationError(f"manifest references missing file {rel}")
    net = MultilayerNetwork.from_edge_lists(
        manifest.n, [read_edges(base / f, manifest.n) for f in manifest.layer_files]
    )
    cov = labels = None
    if manifest.covariate_file:
        cov = read_covariates(base / manifest.covariate_file, manifest.covariate_bound)
        if cov.n != manifest.n:
            raise ValidationError("covariate row count differs from n")
    if manifest.label_file:
        labels = read_labels(base / manifest.label_file)
        if labels.size != manifest.n:
            raise ValidationError("label count differs from n")
    return Dataset(manifest=manifest, network=net, covariates=cov, labels=labels)
