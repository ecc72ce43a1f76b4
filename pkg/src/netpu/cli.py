"""Command-line pipeline: features, label, validate, discover, classify.

Every output directory is self-describing: a meta JSON embeds the full run
config, content hashes of the input files, and the resolved runtime choices
(backend, thread count), so a run can be reproduced from its outputs alone.
Failures print one machine-readable JSON object to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from netpu import classifier, evaluate, io, kernels
from netpu.config import PipelineConfig
from netpu.graph import Graph, build_graph, largest_connected_component
from netpu.labeling import LABEL_NAMES
from netpu.pipeline import PipelineResult, discovery_ranking, run_labeling
from netpu.seeds import SeedReport, load_seeds, mask_seeds

_CONFIG_FLAGS = (
    ("edges", str), ("seeds", str), ("extended_seeds", str), ("output_dir", str),
    ("t", float), ("alpha_ns", float), ("alpha_nr", float), ("alpha_restart", float),
    ("quantile_level", float), ("rn_count", int), ("folds", int), ("rng_seed", int),
    ("threads", int), ("max_iter", int), ("tol", float),
)


def _parse_bools(text: str) -> tuple[bool, ...]:
    return tuple(part.strip() in ("1", "true", "yes") for part in text.split(","))


def _add_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    for name, typ in _CONFIG_FLAGS:
        p.add_argument(f"--{name.replace('_', '-')}", type=typ, default=None)
    p.add_argument("--split", nargs=2, type=float, default=None,
                   metavar=("F1", "F2"), help="ranking cut fractions")
    p.add_argument("--log-transform", type=str, default=None,
                   help="comma list of 4 flags, e.g. 1,1,0,0")
    p.add_argument("--biogrid", action="store_true",
                   help="edges file is a BioGRID tab3 export")


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    data: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    cfg = PipelineConfig.from_dict(data)
    for name, _ in _CONFIG_FLAGS:
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    if args.split is not None:
        cfg.split = tuple(args.split)
    if args.log_transform is not None:
        cfg.log_transform = _parse_bools(args.log_transform)
    cfg.validate()
    return cfg


def _require(cfg: PipelineConfig, *fields: str) -> None:
    for f in fields:
        if getattr(cfg, f) is None:
            raise ValueError(f"missing required input: --{f.replace('_', '-')}")


def _load_graph(cfg: PipelineConfig, biogrid: bool) -> tuple[Graph, dict]:
    edges = io.read_biogrid_tab3(cfg.edges) if biogrid else io.read_edge_tsv(cfg.edges)
    g_full = build_graph(edges)
    g = largest_connected_component(g_full)
    meta = {
        "nodes_total": g_full.n_nodes,
        "edges_total": g_full.n_edges,
        "nodes": g.n_nodes,
        "edges": g.n_edges,
    }
    return g, meta


def _seed_report_dict(report: SeedReport) -> dict:
    return {
        "rows": report.n_rows,
        "mapped": report.n_mapped,
        "dropped": sorted(report.dropped),
        "duplicates": report.duplicates,
    }


def _meta(cfg: PipelineConfig, graph_meta: dict, seed_report: SeedReport | None) -> dict:
    hashes = {}
    for field in ("edges", "seeds", "extended_seeds"):
        path = getattr(cfg, field)
        if path:
            hashes[field] = io.sha256_file(path)
    meta = {
        "config": cfg.to_dict(),
        "input_hashes": hashes,
        "graph": graph_meta,
        "backend": kernels.backend_name(),
        "threads_resolved": cfg.threads or os.cpu_count() or 1,
    }
    if seed_report is not None:
        meta["seed_report"] = _seed_report_dict(seed_report)
    return meta


def _out(cfg: PipelineConfig, filename: str) -> str:
    return os.path.join(cfg.output_dir, filename)


def _full_ranks(g_inf: np.ndarray) -> np.ndarray:
    """1-based rank of every node in the (-g_inf, id) ordering."""
    order = np.lexsort((np.arange(len(g_inf)), -g_inf))
    ranks = np.empty(len(g_inf), dtype=np.int64)
    ranks[order] = np.arange(1, len(g_inf) + 1)
    return ranks


def _write_feature_files(cfg: PipelineConfig, g: Graph, result: PipelineResult,
                         labels: list[str], meta: dict) -> None:
    fm = result.feature_matrix
    io.write_features_tsv(_out(cfg, "features.tsv"), g.node_names, fm.values, labels)
    io.write_features_tsv(_out(cfg, "features_raw.tsv"), g.node_names, fm.raw, labels)
    meta["normalization"] = {
        "columns": list(io.FEATURE_COLUMNS),
        "log_transform": list(cfg.log_transform),
        "col_min": [io.fmt(v) for v in fm.col_min],
        "col_max": [io.fmt(v) for v in fm.col_max],
    }
    meta["similarity"] = {
        "e_cutoff": io.fmt(result.similarity.threshold.e_cutoff),
        "w_cutoff": io.fmt(result.similarity.threshold.w_cutoff),
        "exact": result.similarity.threshold.exact,
        "n_pairs": result.similarity.threshold.n_pairs,
        "retained_entries": int(result.similarity.matrix.nnz),
    }
    meta["propagation"] = {
        "iterations": result.state.iterations,
        "residual": io.fmt(result.state.residual),
        "norm": "euclidean",
        "n_positive": int((result.labels == 0).sum()),
        "n_reliable_negative": len(result.rn_ids),
        "class_counts": {name: int((result.labels == code).sum())
                         for code, name in enumerate(LABEL_NAMES)},
    }


def cmd_features(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    _require(cfg, "edges", "seeds")
    g, graph_meta = _load_graph(cfg, args.biogrid)
    seeds, report = load_seeds(cfg.seeds, g)
    from netpu.features import assemble_features
    fm = assemble_features(g, seeds, t=cfg.t, alpha_ns=cfg.alpha_ns,
                           alpha_nr=cfg.alpha_nr, transforms=cfg.log_transform,
                           threads=cfg.threads)
    labels = ["P" if m else "-" for m in seeds.member_mask(g.n_nodes)]
    io.write_features_tsv(_out(cfg, "features.tsv"), g.node_names, fm.values, labels)
    io.write_features_tsv(_out(cfg, "features_raw.tsv"), g.node_names, fm.raw, labels)
    meta = _meta(cfg, graph_meta, report)
    meta["normalization"] = {
        "columns": list(io.FEATURE_COLUMNS),
        "log_transform": list(cfg.log_transform),
        "col_min": [io.fmt(v) for v in fm.col_min],
        "col_max": [io.fmt(v) for v in fm.col_max],
    }
    io.write_json(_out(cfg, "features_meta.json"), meta)
    print(f"wrote features for {g.n_nodes} nodes to {cfg.output_dir}")
    return 0


def cmd_label(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    _require(cfg, "edges", "seeds")
    g, graph_meta = _load_graph(cfg, args.biogrid)
    seeds, report = load_seeds(cfg.seeds, g)
    result = run_labeling(g, seeds, cfg)
    names = result.assignment.names()
    meta = _meta(cfg, graph_meta, report)
    _write_feature_files(cfg, g, result, names, meta)
    ranks = _full_ranks(result.state.g_inf)
    io.write_labels_tsv(_out(cfg, "labels.tsv"), g.node_names, names,
                        result.state.g_inf, ranks)
    io.write_json(_out(cfg, "labels_meta.json"), meta)
    counts = meta["propagation"]["class_counts"]
    print("labels: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    _require(cfg, "edges", "seeds")
    g, graph_meta = _load_graph(cfg, args.biogrid)
    seeds, report = load_seeds(cfg.seeds, g)
    masks = []
    for fold in range(cfg.folds):
        retained, held = mask_seeds(seeds, fold, cfg.folds, cfg.rng_seed)
        masks.append({
            "fold": fold,
            "held_out": [g.node_names[i] for i in held.tolist()],
            "retained_count": len(retained),
        })
    recovery = evaluate.masked_recovery(g, seeds, cfg.folds, cfg)
    meta = _meta(cfg, graph_meta, report)
    meta["masks"] = masks
    meta["recovery"] = recovery.to_dict()
    io.write_json(_out(cfg, "validation.json"), meta)

    lines = ["class\tmean_pct\tstd_pct" +
             "".join(f"\tfold_{f.fold}" for f in recovery.folds)]
    for name in evaluate.RECOVERY_CLASSES:
        row = [name, f"{100 * recovery.mean[name]:.3f}", f"{100 * recovery.std[name]:.3f}"]
        for f in recovery.folds:
            row.append("failed" if f.failed else f"{100 * f.fractions[name]:.3f}")
        lines.append("\t".join(row))
    io.atomic_write_text(_out(cfg, "validation.tsv"), "\n".join(lines) + "\n")
    lp = recovery.mean["LP"]
    print(f"held-out seeds recovered as LP: {100 * lp:.3f}% mean over "
          f"{cfg.folds - recovery.n_failed} fold(s)")
    return 0


def cmd_discover(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    _require(cfg, "edges", "seeds", "extended_seeds")
    g, graph_meta = _load_graph(cfg, args.biogrid)
    seeds, report = load_seeds(cfg.seeds, g)
    extended, ext_report = load_seeds(cfg.extended_seeds, g)
    result = run_labeling(g, seeds, cfg)
    ranking = discovery_ranking(result, seeds.ids)
    percentages = tuple(float(p) for p in args.percentages.split(","))
    curve = evaluate.discovery_f1(ranking, seeds.ids, extended.ids, percentages)
    io.write_f1_curve_csv(_out(cfg, "discovery.csv"), curve)

    targets = set(extended.ids.tolist()) - set(seeds.ids.tolist())
    names = result.assignment.names()
    lines = ["gene\tg_inf\tlabel\tis_new_target"]
    for node in ranking.tolist():
        lines.append(f"{g.node_names[node]}\t{io.fmt(result.state.g_inf[node])}"
                     f"\t{names[node]}\t{int(node in targets)}")
    io.atomic_write_text(_out(cfg, "candidates.tsv"), "\n".join(lines) + "\n")

    meta = _meta(cfg, graph_meta, report)
    meta["extended_seed_report"] = _seed_report_dict(ext_report)
    meta["curve"] = [{"pct": p.pct, "k": p.k, "precision": p.precision,
                      "recall": p.recall, "f1": p.f1} for p in curve]
    io.write_json(_out(cfg, "discovery.json"), meta)
    print(f"F1 at 100%: {curve[-1].f1:.4f} over {len(targets)} target gene(s)")
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    _require(cfg, "edges", "seeds")
    g, graph_meta = _load_graph(cfg, args.biogrid)
    seeds, report = load_seeds(cfg.seeds, g)
    result = run_labeling(g, seeds, cfg)
    x = result.feature_matrix.values
    y = result.labels.astype(np.int64)
    train_idx, test_idx = classifier.stratified_split(
        y, train_fraction=args.train_fraction, rng_seed=cfg.rng_seed)
    model = classifier.train(x[train_idx], y[train_idx], lr=args.lr,
                             epochs=args.epochs, l2=args.l2)
    predictions = model.predict(x[test_idx])
    metrics = evaluate.classification_metrics(y[test_idx], predictions)

    meta = _meta(cfg, graph_meta, report)
    meta["classifier"] = {
        "kind": "softmax_gd",
        "lr": args.lr,
        "epochs": args.epochs,
        "l2": args.l2,
        "train_fraction": args.train_fraction,
        "train_size": int(len(train_idx)),
        "test_size": int(len(test_idx)),
        "final_loss": model.history[-1] if model.history else None,
    }
    meta["metrics"] = metrics.to_dict()
    io.write_json(_out(cfg, "metrics.json"), meta)
    io.write_json(_out(cfg, "model.json"), {
        "classes": list(model.class_names),
        "weights": model.weights.tolist(),
        "bias": model.bias.tolist(),
    })

    lines = ["class\tprecision\trecall\tf1\tsupport"]
    for i, name in enumerate(metrics.classes):
        lines.append(f"{name}\t{metrics.precision[i]:.4f}\t{metrics.recall[i]:.4f}"
                     f"\t{metrics.f1[i]:.4f}\t{int(metrics.support[i])}")
    mp, mr, mf = metrics.macro_avg
    lines.append(f"macro_avg\t{mp:.4f}\t{mr:.4f}\t{mf:.4f}\t{int(metrics.support.sum())}")
    lines.append(f"accuracy\t\t\t{metrics.accuracy:.4f}\t{int(metrics.support.sum())}")
    io.atomic_write_text(_out(cfg, "metrics.tsv"), "\n".join(lines) + "\n")
    print(f"test accuracy {metrics.accuracy:.4f} on {len(test_idx)} node(s)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netpu",
        description="Network diffusion features and positive-unlabeled relabeling "
                    "over an interaction graph.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("features", help="compute the four node features")
    _add_flags(p)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("label", help="features plus five-class relabeling")
    _add_flags(p)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("validate", help="masked-seed recovery over folds")
    _add_flags(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("discover", help="ranked discovery F1 against extended seeds")
    _add_flags(p)
    p.add_argument("--percentages", default="0.25,0.5,0.75,1.0",
                   help="comma list of ranking cut percentages in (0, 1]")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("classify", help="train the built-in classifier on the labels")
    _add_flags(p)
    p.add_argument("--train-fraction", type=float, default=0.7)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--l2", type=float, default=1e-4)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # deliberate catch-all: the contract is JSON on stderr
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
