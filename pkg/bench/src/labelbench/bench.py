"""Train and score reference classifiers on an exported feature/label pair.

Three scikit-learn models are benchmarked with documented defaults: a
random forest (100 trees), an RBF support vector machine (C=1), and a
one-hidden-layer perceptron (64 units, 200 epochs). Every run records its
inputs by hash, its full hyperparameters, and a confusion-matrix figure,
and is reproducible from the seed alone.
"""

import json
import os
from dataclasses import dataclass

import numpy as np
from matplotlib.figure import Figure
from sklearn.ensemble import RandomForestClassifier
from sklearn.model_selection import train_test_split
from sklearn.neural_network import MLPClassifier
from sklearn.svm import SVC

from labelbench.io import CLASS_NAMES, load_dataset, sha256_file

CLASSIFIERS = ("rf", "svm", "mlp")

_DEFAULTS = {
    "rf": {"n_estimators": 100},
    "svm": {"kernel": "rbf", "C": 1.0},
    "mlp": {"hidden_layer_sizes": (64,), "max_iter": 200},
}


def make_classifier(name: str, seed: int, overrides: dict | None = None):
    """Estimator plus the effective hyperparameters that get logged."""
    if name not in _DEFAULTS:
        raise ValueError(f"unknown classifier '{name}'; choose from {CLASSIFIERS}")
    params = dict(_DEFAULTS[name])
    params.update(overrides or {})
    if name == "rf":
        est = RandomForestClassifier(random_state=seed, **params)
    elif name == "svm":
        est = SVC(random_state=seed, **params)
    else:
        est = MLPClassifier(random_state=seed, **params)
    return est, params


def classification_metrics(y_true: np.ndarray, y_pred: np.ndarray,
                           classes: tuple[str, ...] = CLASS_NAMES) -> dict:
    """Exact counting metrics, same conventions as the exporting tool."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    k = len(classes)
    confusion = np.bincount(y_true * k + y_pred, minlength=k * k).reshape(k, k)
    tp = np.diag(confusion).astype(np.float64)
    support = confusion.sum(axis=1)
    predicted = confusion.sum(axis=0)
    with np.errstate(invalid="ignore"):
        precision = np.where(predicted > 0, tp / predicted, 0.0)
        recall = np.where(support > 0, tp / support, 0.0)
        pr = precision + recall
        f1 = np.where(pr > 0, 2 * precision * recall / pr, 0.0)
    w = support / support.sum()
    per_class = {
        name: {
            "precision": float(precision[i]),
            "recall": float(recall[i]),
            "f1": float(f1[i]),
            "support": int(support[i]),
        }
        for i, name in enumerate(classes)
    }
    return {
        "classes": list(classes),
        "confusion": confusion.tolist(),
        "per_class": per_class,
        "macro_avg": {"precision": float(precision.mean()),
                      "recall": float(recall.mean()),
                      "f1": float(f1.mean())},
        "weighted_avg": {"precision": float(w @ precision),
                         "recall": float(w @ recall),
                         "f1": float(w @ f1)},
        "accuracy": float(tp.sum() / len(y_true)),
    }


def confusion_figure(confusion: np.ndarray, classes: tuple[str, ...],
                     path: str, title: str) -> None:
    fig = Figure(figsize=(4.4, 3.9))
    ax = fig.add_subplot()
    im = ax.imshow(confusion, cmap="Blues")
    ax.set_xticks(range(len(classes)), classes)
    ax.set_yticks(range(len(classes)), classes)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    ax.set_title(title)
    cutoff = confusion.max() / 2 if confusion.max() else 0
    for i in range(len(classes)):
        for j in range(len(classes)):
            ax.text(j, i, str(int(confusion[i, j])), ha="center", va="center",
                    color="white" if confusion[i, j] > cutoff else "black",
                    fontsize=8)
    fig.colorbar(im, ax=ax)
    fig.savefig(path, dpi=150, bbox_inches="tight")


@dataclass
class BenchRun:
    classifier: str
    seed: int
    params: dict
    input_hashes: dict
    train_size: int
    test_size: int
    metrics: dict
    image_path: str

    def to_dict(self) -> dict:
        params = {k: (list(v) if isinstance(v, tuple) else v)
                  for k, v in self.params.items()}
        return {
            "classifier": self.classifier,
            "seed": self.seed,
            "params": params,
            "input_hashes": self.input_hashes,
            "train_size": self.train_size,
            "test_size": self.test_size,
            "metrics": self.metrics,
            "image_path": self.image_path,
        }


def bench(features_file: str, labels_file: str, classifier: str, seed: int = 0,
          out_dir: str = ".", overrides: dict | None = None) -> BenchRun:
    """One train/evaluate run on a 70/30 stratified split of the exported data."""
    _, x, y = load_dataset(features_file, labels_file)
    counts = np.bincount(y, minlength=len(CLASS_NAMES))
    for i, name in enumerate(CLASS_NAMES):
        if counts[i] == 0:
            raise ValueError(f"class '{name}' has no samples in {labels_file}")
        if counts[i] < 2:
            raise ValueError(f"class '{name}' has 1 sample; need at least 2 "
                             "for a stratified split")
    est, params = make_classifier(classifier, seed, overrides)
    x_tr, x_te, y_tr, y_te = train_test_split(
        x, y, train_size=0.7, stratify=y, random_state=seed)
    est.fit(x_tr, y_tr)
    metrics = classification_metrics(y_te, est.predict(x_te))

    os.makedirs(out_dir, exist_ok=True)
    image_path = os.path.join(out_dir, f"confusion_{classifier}.png")
    confusion_figure(np.array(metrics["confusion"]), CLASS_NAMES, image_path,
                     f"{classifier} ({len(y_te)} test nodes)")
    run = BenchRun(
        classifier=classifier,
        seed=seed,
        params=params,
        input_hashes={"features": sha256_file(features_file),
                      "labels": sha256_file(labels_file)},
        train_size=int(len(y_tr)),
        test_size=int(len(y_te)),
        metrics=metrics,
        image_path=image_path,
    )
    with open(os.path.join(out_dir, f"bench_{classifier}.json"), "w",
              encoding="utf-8") as fh:
        json.dump(run.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return run
