"""Simulation sweeps over network size, mis-specification rate and method.

Seeds are derived, never drawn: the first 8 bytes (big-endian) of the
BLAKE2b digest of ``"base|tag|N|q|rep"`` give a 64-bit seed. The dataset of a
cell uses the tag ``data``, each method its own name, so every method sees the
same sample and a sweep gives the same rows whatever order cells run in.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .core import ValidationError
from .metrics import misclustering_rate, nmi
from .msbmc import (
    MsbmcModel,
    SimplifiedParams,
    expand_simplified,
    experiment1_model,
    misspecify_labels,
    sample,
)
from .pipeline import ClusterConfig, run_method

EXPERIMENTS = ("exp1a", "exp1b-subset", "exp2", "custom")
DEFAULT_METHODS = {
    "exp1a": ("SCANC", "SCALC", "SCAN", "SCAC", "SingleLayer"),
    "exp1b-subset": ("SCANC", "SCALC", "MeanAdj"),
    "exp2": ("SCANC", "SCALC", "SCAN", "SCAC", "MeanAdj"),
    "custom": ("SCANC", "SCALC", "SCAN", "SCAC", "MeanAdj"),
}
DEFAULT_N = {
    "exp1a": tuple(range(90, 811, 60)),
    "exp1b-subset": tuple(range(90, 811, 60)),
    "exp2": (300,),
    "custom": (300,),
}
DEFAULT_Q = {"exp2": (0.0, 0.1, 0.2, 0.3, 0.4, 0.45)}

RESULT_COLUMNS = ("method", "N", "L", "K", "q", "rep", "seed", "alpha", "tau", "err", "nmi")
SUMMARY_COLUMNS = ("method", "N", "q", "reps", "mean_err", "sd_err", "mean_nmi")


def derive_seed(*parts) -> int:
    key = "|".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "exp1a"
    variant: str = "B1"
    n_values: tuple[int, ...] = ()
    q_values: tuple[float, ...] = (0.0,)
    methods: tuple[str, ...] = ()
    replicates: int = 100
    base_seed: int = 0
    grid_size: int = 20
    restarts: int = 20
    single_layer: int = 3
    simplified: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValidationError(f"unknown experiment {self.experiment!r}")
        if not self.n_values:
            object.__setattr__(self, "n_values", DEFAULT_N[self.experiment])
        if self.experiment == "exp2" and self.q_values == (0.0,):
            object.__setattr__(self, "q_values", DEFAULT_Q["exp2"])
        if not self.methods:
            object.__setattr__(self, "methods", DEFAULT_METHODS[self.experiment])
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "q_values", tuple(float(q) for q in self.q_values))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.replicates < 1:
            raise ValidationError("replicates must be at least 1")
        if self.experiment == "custom" and self.simplified is None:
            raise ValidationError("custom experiments need simplified model parameters")
        k = self.k
        if any(n <= 0 or n % k for n in self.n_values):
            raise ValidationError(f"every N must be a positive multiple of K={k}")

    @property
    def k(self) -> int:
        return int(self.simplified["k"]) if self.experiment == "custom" else 3

    def model(self, n: int) -> MsbmcModel:
        if self.experiment == "custom":
            params = dict(self.simplified)
            params["n"] = n
            return expand_simplified(SimplifiedParams(**params))
        return experiment1_model(self.variant, n)

    def to_json(self) -> dict:
        return asdict(self)


def run_cell(config: ExperimentConfig, n: int, q: float, rep: int) -> list[dict]:
    """Sample one dataset and run every configured method on it."""
    model = config.model(n)
    data_seed = derive_seed(config.base_seed, "data", n, q, rep)
    layer_labels = None
    if q > 0:
        z0 = model.block_labels()
        layer_labels = misspecify_labels(
            z0, q, model.n_layers, derive_seed(config.base_seed, "misspec", n, q, rep), model.k
        )
    net, cov, z = sample(model, data_seed, layer_labels=layer_labels)
    blocks = model.covariate_blocks()
    layer_cov = cov.values if blocks is None else cov.values[:, blocks[config.single_layer - 1]]

    rows = []
    for method in config.methods:
        seed = derive_seed(config.base_seed, method, n, q, rep)
        cfg = ClusterConfig(seed=seed, grid_size=config.grid_size, restarts=config.restarts)
        res = run_method(
            method, net, cov, model.k, cfg, layer=config.single_layer, layer_covariates=layer_cov
        )
        name = f"SingleLayer{config.single_layer}" if method == "SingleLayer" else method
        rows.append(
            {
                "method": name,
                "N": n,
                "L": model.n_layers,
                "K": model.k,
                "q": q,
                "rep": rep,
                "seed": seed,
                "alpha": res.alpha,
                "tau": res.tau,
                "err": misclustering_rate(z, res.labels),
                "nmi": nmi(z, res.labels),
                "runtime_ms": res.runtime_ms,
            }
        )
    return rows


def _cell(args):
    return run_cell(*args)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[dict]:
    """All rows of a sweep in canonical order (method, N, q, rep)."""
    cells = [
        (config, n, q, rep)
        for n in config.n_values
        for q in config.q_values
        for rep in range(config.replicates)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_cell, cells))
    else:
        chunks = [_cell(c) for c in cells]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r["method"], r["N"], r["q"], r["rep"]))
    return rows


def summarize(rows: list[dict]) -> list[dict]:
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        groups.setdefault((r["method"], r["N"], r["q"]), []).append(r)
    out = []
    for (method, n, q), grp in sorted(groups.items()):
        errs = np.array([g["err"] for g in grp])
        out.append(
            {
                "method": method,
                "N": n,
                "q": q,
                "reps": len(grp),
                "mean_err": float(errs.mean()),
                "sd_err": float(errs.std(ddof=1)) if errs.size > 1 else 0.0,
                "mean_nmi": float(np.mean([g["nmi"] for g in grp])),
            }
        )
    return out


def _fmt(value, column: str) -> str:
    if column in ("err", "nmi", "mean_err", "sd_err", "mean_nmi"):
        return f"{value:.6f}"
    if column == "q":
        return f"{value:.4f}"
    if column in ("alpha", "tau"):
        return f"{value:.10e}"
    if column == "runtime_ms":
        return f"{value:.3f}"
    return str(value)


def format_table(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c], c) for c in columns])
    return buf.getvalue()


def write_results(rows: list[dict], directory, config: ExperimentConfig | None = None) -> dict:
    """Write results.csv, summary.csv and timings.csv; returns their paths.

    Run times live in their own file so that the results and summary tables
    are byte-identical across repeated runs.
    """
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "results": out / "results.csv",
        "summary": out / "summary.csv",
        "timings": out / "timings.csv",
    }
    paths["results"].write_text(format_table(rows, RESULT_COLUMNS))
    paths["summary"].write_text(format_table(summarize(rows), SUMMARY_COLUMNS))
    paths["timings"].write_text(
        format_table(rows, ("method", "N", "q", "rep", "runtime_ms"))
    )
    if config is not None:
        paths["config"] = out / "config.json"
        paths["config"].write_text(json.dumps(config.to_json(), indent=2, sort_keys=True) + "\n")
    return paths
