"""Turn timestamped pairwise contact records into a multilayer dataset.

Input lines hold ``t i j`` (extra columns ignored) separated by whitespace or
commas, with ``t`` in seconds on a fixed sampling grid. Each time window
becomes one layer: two nodes are linked when they were in contact at least
once inside the window.

When a node attribute table (``id class gender``) is supplied, each window
also yields covariates. A run of consecutive contact records for a pair is one
interaction; its duration is the number of records. For node i, gender g and
duration bin b the covariate is the share of i's interactions in the window
whose partner has gender g and whose duration falls in bin b.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import MultilayerNetwork, ValidationError
from .io import write_dataset

DEFAULT_DURATION_BINS = (1, 2, 3, 4, 5, 6, 7)
_SPLIT = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class ContactDataset:
    node_ids: tuple[str, ...]
    network: MultilayerNetwork
    covariates: np.ndarray | None
    covariate_blocks: list[list[int]] | None
    labels: np.ndarray | None
    label_names: tuple[str, ...] | None


def read_contacts(path) -> np.ndarray:
    """Rows of (t, i, j) as a structured array with string node ids."""
    rows = []
    for line in Path(path).read_text().splitlines():
        parts = [p for p in _SPLIT.split(line.strip()) if p]
        if len(parts) < 3 or not parts[0].lstrip("-").isdigit():
            continue
        a, b = parts[1], parts[2]
        if a == b:
            continue
        rows.append((int(parts[0]), a, b))
    if not rows:
        raise ValidationError(f"{path}: no contact records found")
    return np.array(rows, dtype=[("t", np.int64), ("i", object), ("j", object)])


def read_attributes(path) -> dict[str, tuple[str, str]]:
    out = {}
    for line in Path(path).read_text().splitlines():
        parts = [p for p in _SPLIT.split(line.strip()) if p]
        if len(parts) < 3 or parts[0].lower() == "id":
            continue
        out[parts[0]] = (parts[1], parts[2])
    return out


def equal_windows(t_min: int, t_max: int, count: int, resolution: int) -> list[tuple[int, int]]:
    edges = np.linspace(t_min, t_max + resolution, count + 1)
    return [(int(round(a)), int(round(b))) for a, b in zip(edges[:-1], edges[1:])]


def _bin_index(duration: int, bins: Sequence[int]) -> int:
    # bins are lower edges; the last one is open-ended; -1 means below the first
    return int(np.searchsorted(bins, duration, side="right")) - 1


def build_contact_dataset(
    contacts: np.ndarray,
    windows: Sequence[tuple[int, int]],
    attributes: dict[str, tuple[str, str]] | None = None,
    *,
    resolution: int = 20,
    duration_bins: Sequence[int] = DEFAULT_DURATION_BINS,
    genders: Sequence[str] | None = None,
    class_prefix: str | None = None,
) -> ContactDataset:
    """Layers, covariates and (class, gender) labels from raw contacts.

    ``class_prefix`` keeps only nodes whose class starts with it (for example
    one school grade); it requires ``attributes``.
    """
    bins = sorted(int(b) for b in duration_bins)
    if not bins or bins[0] < 1:
        raise ValidationError("duration bins are positive lower edges")
    if class_prefix is not None and attributes is None:
        raise ValidationError("filtering by class needs the attribute table")

    if attributes is not None:
        ids = [n for n, (cls, _) in attributes.items() if class_prefix is None or cls.startswith(class_prefix)]
    else:
        ids = list(set(contacts["i"]) | set(contacts["j"]))
    ids = sorted(ids, key=lambda s: (len(s), s))
    index = {n: a for a, n in enumerate(ids)}
    n = len(ids)

    mask = np.array([a in index and b in index for a, b in zip(contacts["i"], contacts["j"])])
    contacts = contacts[mask]
    ti = contacts["t"]
    ii = np.array([index[a] for a in contacts["i"]], dtype=np.int64)
    jj = np.array([index[b] for b in contacts["j"]], dtype=np.int64)
    lo, hi = np.minimum(ii, jj), np.maximum(ii, jj)

    if attributes is not None:
        if genders is None:
            genders = sorted({attributes[x][1] for x in ids})
        gender_of = [attributes[x][1] for x in ids]

    edge_lists, cov_blocks_values = [], []
    for start, end in windows:
        sel = (ti >= start) & (ti < end)
        pairs = np.unique(np.column_stack([lo[sel], hi[sel]]), axis=0)
        edge_lists.append(pairs.reshape(-1, 2))
        if attributes is None:
            continue
        times = defaultdict(list)
        for t, a, b in zip(ti[sel], lo[sel], hi[sel]):
            times[(a, b)].append(int(t))
        counts = np.zeros((n, len(genders), len(bins)))
        for (a, b), ts in times.items():
            ts = np.unique(ts)
            breaks = np.flatnonzero(np.diff(ts) != resolution)
            lengths = np.diff(np.concatenate([[0], breaks + 1, [ts.size]]))
            for length in lengths:
                col = _bin_index(int(length), bins)
                if col < 0:
                    continue
                for me, other in ((a, b), (b, a)):
                    g = gender_of[other]
                    if g in genders:
                        counts[me, list(genders).index(g), col] += 1
        total = counts.sum(axis=(1, 2))
        share = np.divide(counts, total[:, None, None], out=np.zeros_like(counts), where=total[:, None, None] > 0)
        cov_blocks_values.append(share.reshape(n, -1))

    net = MultilayerNetwork.from_edge_lists(n, edge_lists)
    covariates = blocks = labels = names = None
    if attributes is not None:
        covariates = np.hstack(cov_blocks_values)
        width = len(genders) * len(bins)
        blocks = [list(range(w * width, (w + 1) * width)) for w in range(len(windows))]
        groups = [f"{attributes[x][0]}:{attributes[x][1]}" for x in ids]
        names = tuple(sorted(set(groups)))
        labels = np.array([names.index(g) + 1 for g in groups], dtype=np.int64)
    return ContactDataset(tuple(ids), net, covariates, blocks, labels, names)


def write_contact_dataset(ds: ContactDataset, directory, name: str = "contacts") -> Path:
    path = write_dataset(
        directory,
        ds.network,
        ds.covariates,
        ds.labels,
        name=name,
        covariate_blocks=ds.covariate_blocks,
    )
    out = Path(directory)
    (out / "nodes.csv").write_text("index,id\n" + "".join(f"{a},{x}\n" for a, x in enumerate(ds.node_ids)))
    if ds.label_names is not None:
        (out / "label_names.csv").write_text(
            "label,group\n" + "".join(f"{a},{g}\n" for a, g in enumerate(ds.label_names, start=1))
        )
    return path
