"""Command-line entry point: ``multicov <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import contacts as contacts_mod
from .core import ValidationError
from .experiments import EXPERIMENTS, ExperimentConfig, derive_seed, run_experiment, write_results
from .io import read_dataset, read_labels, write_dataset, write_labels
from .metrics import best_merged_nmi, misclustering_rate, nmi
from .msbmc import SimplifiedParams, expand_simplified, experiment1_model, misspecify_labels, sample
from .pipeline import ClusterConfig, MissingCovariatesError, run_method

METHODS = ("SCANC", "SCALC", "SCAN", "SCAC", "MeanAdj", "SingleLayer")

log = logging.getLogger("multicov")


class ConfigurationError(Exception):
    pass


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _add_tuning(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-size", type=int, default=20)
    p.add_argument("--restarts", type=int, default=20)


def cmd_simulate(args) -> int:
    if args.params:
        params = json.loads(Path(args.params).read_text())
        params.setdefault("n", args.n)
        model = expand_simplified(SimplifiedParams(**params))
    else:
        model = experiment1_model(args.variant, args.n)
    layer_labels = None
    if args.q > 0:
        layer_labels = misspecify_labels(
            model.block_labels(), args.q, model.n_layers, derive_seed(args.seed, "misspec"), model.k
        )
    net, cov, z = sample(model, args.seed, shuffle=args.shuffle, layer_labels=layer_labels)
    name = args.name or (f"simplified-n{model.n}" if args.params else f"{args.variant}-n{model.n}")
    path = write_dataset(args.out, net, cov, z, name=name, covariate_blocks=model.covariate_blocks())
    print(path)
    return 0


def cmd_cluster(args) -> int:
    ds = read_dataset(args.manifest)
    if args.method in ("SCANC", "SCALC", "SCAC") and ds.covariates is None:
        raise ConfigurationError(f"{args.method} needs covariates but the dataset has none")
    cfg = ClusterConfig(
        tau=args.tau,
        alpha=args.alpha,
        seed=args.seed,
        restarts=args.restarts,
        grid_size=args.grid_size,
    )
    layer_cov = ds.layer_covariates(args.layer) if args.method == "SingleLayer" else None
    res = run_method(
        args.method, ds.network, ds.covariates, args.k, cfg, layer=args.layer, layer_covariates=layer_cov
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_labels(out / "labels.csv", res.labels)
    record = res.record()
    record["manifest"] = str(Path(args.manifest))
    if ds.labels is not None:
        record["err"] = misclustering_rate(ds.labels, res.labels)
        record["nmi"] = nmi(ds.labels, res.labels)
    (out / "run.json").write_text(json.dumps(record, indent=2) + "\n")
    print(json.dumps({k: record[k] for k in ("method", "alpha", "tau", "wcss") if k in record}))
    return 0


def cmd_experiment(args) -> int:
    base = json.loads(Path(args.config).read_text()) if args.config else {}
    overrides = {
        "experiment": args.experiment,
        "variant": args.variant,
        "n_values": tuple(_ints(args.n)) if args.n else None,
        "q_values": tuple(_floats(args.q)) if args.q else None,
        "methods": tuple(args.methods.split(",")) if args.methods else None,
        "replicates": args.replicates,
        "base_seed": args.seed,
        "grid_size": args.grid_size,
        "restarts": args.restarts,
        "single_layer": args.layer,
    }
    for key, value in overrides.items():
        if value is not None:
            base[key] = value
    for key in ("n_values", "q_values", "methods"):
        if key in base:
            base[key] = tuple(base[key])
    config = ExperimentConfig(**base)
    unknown = set(config.methods) - set(METHODS)
    if unknown:
        raise ConfigurationError(f"unknown methods: {sorted(unknown)}")
    rows = run_experiment(config, workers=args.workers)
    paths = write_results(rows, args.out, config)
    print(paths["results"])
    return 0


def _read_merges(path) -> list[dict[int, int]]:
    data = json.loads(Path(path).read_text())
    return [{int(k): int(v) for k, v in m.items()} for m in data]


def cmd_eval(args) -> int:
    a = read_labels(args.labels_a)
    b = read_labels(args.labels_b)
    out = {"err": misclustering_rate(a, b), "nmi": nmi(a, b)}
    if args.merge_maps:
        out["best_merged_nmi"] = best_merged_nmi(a, b, _read_merges(args.merge_maps))
    print(json.dumps(out))
    return 0


def cmd_preprocess_contacts(args) -> int:
    records = contacts_mod.read_contacts(args.contacts)
    attrs = contacts_mod.read_attributes(args.attributes) if args.attributes else None
    if args.windows:
        windows = [tuple(int(x) for x in w.split("-")) for w in args.windows.split(",")]
    else:
        windows = contacts_mod.equal_windows(
            int(records["t"].min()), int(records["t"].max()), args.n_windows, args.resolution
        )
    ds = contacts_mod.build_contact_dataset(
        records,
        windows,
        attrs,
        resolution=args.resolution,
        duration_bins=_ints(args.duration_bins),
        class_prefix=args.class_prefix,
    )
    path = contacts_mod.write_contact_dataset(ds, args.out, name=args.name)
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multicov",
        description="Spectral community detection on multilayer networks with covariates.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample a synthetic dataset")
    p.add_argument("--variant", choices=("B1", "B2"), default="B1")
    p.add_argument("--params", help="JSON file of simplified model parameters")
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--q", type=float, default=0.0, help="layer-wise label mis-specification rate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shuffle", action="store_true", help="shuffle node order")
    p.add_argument("--name", default="")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("cluster", help="cluster one dataset")
    p.add_argument("manifest")
    p.add_argument("--method", choices=METHODS, default="SCANC")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tau", type=float, default=None, help="default: average aggregated degree")
    p.add_argument("--alpha", type=float, default=None, help="default: WCSS-selected")
    p.add_argument("--layer", type=int, default=None, help="layer for SingleLayer (1-based)")
    _add_tuning(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("experiment", help="run a simulation sweep")
    p.add_argument("--experiment", choices=EXPERIMENTS, default=None)
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--variant", choices=("B1", "B2"), default=None)
    p.add_argument("--n", help="comma-separated node counts")
    p.add_argument("--q", help="comma-separated mis-specification rates")
    p.add_argument("--methods", help="comma-separated method names")
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--layer", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--grid-size", type=int, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("eval", help="compare two label files")
    p.add_argument("labels_a")
    p.add_argument("labels_b")
    p.add_argument("--merge-maps", help="JSON list of {label: merged_label} maps applied to labels_a")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("preprocess-contacts", help="bin timestamped contacts into layers")
    p.add_argument("contacts")
    p.add_argument("--attributes", help="node table: id class gender")
    p.add_argument("--windows", help="comma-separated start-end pairs in seconds")
    p.add_argument("--n-windows", type=int, default=17)
    p.add_argument("--resolution", type=int, default=20, help="seconds between records")
    p.add_argument("--duration-bins", default="1,2,3,4,5,6,7", help="lower edges; last is open")
    p.add_argument("--class-prefix", default=None)
    p.add_argument("--name", default="contacts")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_preprocess_contacts)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if args.command == "cluster" and args.method == "SingleLayer" and args.layer is None:
        parser.error("--layer is required for SingleLayer")
    try:
        return args.func(args)
    except (ConfigurationError, MissingCovariatesError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
