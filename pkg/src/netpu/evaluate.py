"""Validation protocols: per-class metrics, masked-seed recovery, discovery F1."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from netpu.config import PipelineConfig
from netpu.graph import Graph
from netpu.labeling import LABEL_NAMES, PropagationError
from netpu.pipeline import run_labeling
from netpu.seeds import SeedSet, mask_seeds

N_CLASSES = len(LABEL_NAMES)

# held-out seeds are unlabeled during a masked run, so they land in one of these
RECOVERY_CLASSES = ("LP", "WN", "LN", "RN")


@dataclass(frozen=True)
class ClassMetrics:
    classes: tuple[str, ...]
    confusion: np.ndarray  # (k, k) counts, rows = true class
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    accuracy: float

    @property
    def macro_avg(self) -> tuple[float, float, float]:
        return (float(self.precision.mean()), float(self.recall.mean()),
                float(self.f1.mean()))

    @property
    def weighted_avg(self) -> tuple[float, float, float]:
        w = self.support / self.support.sum()
        return (float(w @ self.precision), float(w @ self.recall), float(w @ self.f1))

    def to_dict(self) -> dict[str, Any]:
        per_class = {
            name: {
                "precision": float(self.precision[i]),
                "recall": float(self.recall[i]),
                "f1": float(self.f1[i]),
                "support": int(self.support[i]),
            }
            for i, name in enumerate(self.classes)
        }
        keys = ("precision", "recall", "f1")
        return {
            "classes": list(self.classes),
            "confusion": self.confusion.tolist(),
            "per_class": per_class,
            "macro_avg": dict(zip(keys, self.macro_avg)),
            "weighted_avg": dict(zip(keys, self.weighted_avg)),
            "accuracy": self.accuracy,
        }


def classification_metrics(true_labels: Sequence[int], predicted_labels: Sequence[int],
                           classes: tuple[str, ...] = LABEL_NAMES) -> ClassMetrics:
    """Exact counting metrics over the class alphabet.

    Precision/recall/F1 fall back to 0 for classes with an empty denominator.
    """
    y_true = np.asarray(true_labels, dtype=np.int64)
    y_pred = np.asarray(predicted_labels, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ValueError(f"label sequences differ: {y_true.shape} vs {y_pred.shape}")
    if len(y_true) == 0:
        raise ValueError("empty label sequences")
    k = len(classes)
    if y_true.min() < 0 or y_true.max() >= k or y_pred.min() < 0 or y_pred.max() >= k:
        raise ValueError(f"labels outside the {k}-class alphabet")
    confusion = np.bincount(y_true * k + y_pred, minlength=k * k).reshape(k, k)
    tp = np.diag(confusion).astype(np.float64)
    support = confusion.sum(axis=1)
    predicted = confusion.sum(axis=0)
    with np.errstate(invalid="ignore"):
        precision = np.where(predicted > 0, tp / predicted, 0.0)
        recall = np.where(support > 0, tp / support, 0.0)
        pr = precision + recall
        f1 = np.where(pr > 0, 2 * precision * recall / pr, 0.0)
    accuracy = float(tp.sum() / len(y_true))
    return ClassMetrics(tuple(classes), confusion, precision, recall, f1,
                        support, accuracy)


def _mode(values: np.ndarray) -> float:
    uniq, counts = np.unique(values, return_counts=True)
    return float(uniq[counts.argmax()])  # ties fall to the smallest value


@dataclass(frozen=True)
class FoldRecovery:
    fold: int
    n_held: int
    counts: dict[str, int]
    fractions: dict[str, float]
    score_stats: dict[str, dict[str, float]]  # mean/median/mode per class hit
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class MaskedRecoveryReport:
    folds: tuple[FoldRecovery, ...]
    mean: dict[str, float]
    std: dict[str, float]
    n_failed: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "folds": [
                {
                    "fold": f.fold,
                    "n_held": f.n_held,
                    "counts": f.counts,
                    "fractions": f.fractions,
                    "score_stats": f.score_stats,
                    "error": f.error,
                }
                for f in self.folds
            ],
            "mean": self.mean,
            "std": self.std,
            "n_failed": self.n_failed,
        }


def masked_recovery(g: Graph, full_seeds: SeedSet, folds: int,
                    cfg: PipelineConfig | None = None) -> MaskedRecoveryReport:
    """Hide one fold of seeds at a time and see where the pipeline puts them.

    Held-out seeds are unlabeled for the entire fold run, features included.
    A fold whose propagation fails to converge is marked failed and excluded
    from the aggregate; everything else proceeds.
    """
    if cfg is None:
        cfg = PipelineConfig()
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    score_of = dict(zip(full_seeds.ids.tolist(), full_seeds.scores.tolist()))
    results: list[FoldRecovery] = []
    for fold in range(folds):
        reduced, held = mask_seeds(full_seeds, fold, folds, cfg.rng_seed)
        try:
            run = run_labeling(g, reduced, cfg)
        except (PropagationError, ValueError) as exc:
            results.append(FoldRecovery(fold, len(held), {}, {}, {}, error=str(exc)))
            continue
        held_labels = run.labels[held]
        counts: dict[str, int] = {}
        fractions: dict[str, float] = {}
        stats: dict[str, dict[str, float]] = {}
        for name in RECOVERY_CLASSES:
            code = LABEL_NAMES.index(name)
            hit = held[held_labels == code]
            counts[name] = int(len(hit))
            fractions[name] = len(hit) / len(held)
            if len(hit):
                sc = np.array([score_of[i] for i in hit.tolist()])
                stats[name] = {"mean": float(sc.mean()), "median": float(np.median(sc)),
                               "mode": _mode(sc)}
        results.append(FoldRecovery(fold, len(held), counts, fractions, stats))

    ok = [r for r in results if not r.failed]
    if not ok:
        raise RuntimeError("every fold failed; nothing to aggregate")
    mean: dict[str, float] = {}
    std: dict[str, float] = {}
    for name in RECOVERY_CLASSES:
        vals = np.array([r.fractions[name] for r in ok])
        mean[name] = float(vals.mean())
        std[name] = float(vals.std(ddof=1)) if len(vals) > 1 else 0.0
    return MaskedRecoveryReport(tuple(results), mean, std, len(results) - len(ok))


@dataclass(frozen=True)
class DiscoveryPoint:
    pct: float
    k: int
    precision: float
    recall: float
    f1: float


def discovery_f1(ranking: np.ndarray, curated_ids: np.ndarray, extended_ids: np.ndarray,
                 percentages: Sequence[float] = (0.25, 0.5, 0.75, 1.0)) -> list[DiscoveryPoint]:
    """F1 of the top-k ranked candidates against extended-minus-curated truth.

    For each percentage p, k = ceil(p * |targets|) candidates are predicted
    positive; curated seeds sit in neither the ranking nor the truth set.
    """
    ranking = np.asarray(ranking, dtype=np.int64)
    curated = set(np.asarray(curated_ids, dtype=np.int64).tolist())
    extended = set(np.asarray(extended_ids, dtype=np.int64).tolist())
    targets = extended - curated
    if not targets:
        raise ValueError("extended seed set adds nothing beyond the curated set")
    if curated & set(ranking.tolist()):
        raise ValueError("ranking must exclude curated seeds")
    if len(set(ranking.tolist())) != len(ranking):
        raise ValueError("ranking contains duplicate ids")
    is_target = np.isin(ranking, np.fromiter(targets, dtype=np.int64))
    curve: list[DiscoveryPoint] = []
    for pct in percentages:
        if not (0 < pct <= 1):
            raise ValueError(f"percentage must be in (0, 1], got {pct}")
        k = int(np.ceil(pct * len(targets)))
        k = min(k, len(ranking))
        hits = int(is_target[:k].sum())
        precision = hits / k
        recall = hits / len(targets)
        f1 = 0.0 if hits == 0 else 2 * precision * recall / (precision + recall)
        curve.append(DiscoveryPoint(float(pct), k, precision, recall, f1))
    return curve
