"""Multinomial logistic regression over the engineered features.

Deliberately minimal: full-batch gradient descent from a zero init, L2 decay
on the weight matrix only. Training is deterministic given the inputs, so
repeated runs produce identical models without seeding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from netpu.labeling import LABEL_NAMES


@dataclass
class SoftmaxModel:
    weights: np.ndarray  # (n_features, n_classes)
    bias: np.ndarray  # (n_classes,)
    n_classes: int
    class_names: tuple[str, ...] = LABEL_NAMES
    history: list[float] = field(default_factory=list)

    def decision(self, x: np.ndarray) -> np.ndarray:
        return x @ self.weights + self.bias

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        z = self.decision(np.asarray(x, dtype=np.float64))
        z = z - z.max(axis=1, keepdims=True)
        p = np.exp(z)
        return p / p.sum(axis=1, keepdims=True)

    def predict(self, x: np.ndarray) -> np.ndarray:
        # argmax takes the first maximum, so ties fall to the lowest class code
        return np.argmax(self.decision(np.asarray(x, dtype=np.float64)), axis=1).astype(np.int8)


def loss_and_grad(weights: np.ndarray, bias: np.ndarray, x: np.ndarray,
                  y: np.ndarray, l2: float) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy plus 0.5 * l2 * ||W||^2, with analytic gradients."""
    n = x.shape[0]
    z = x @ weights + bias
    z = z - z.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(z).sum(axis=1))
    loss = float((log_norm - z[np.arange(n), y]).mean() + 0.5 * l2 * (weights ** 2).sum())
    p = np.exp(z - log_norm[:, None])
    p[np.arange(n), y] -= 1.0
    p /= n
    grad_w = x.T @ p + l2 * weights
    grad_b = p.sum(axis=0)
    return loss, grad_w, grad_b


def train(x: np.ndarray, y: np.ndarray, n_classes: int = len(LABEL_NAMES),
          lr: float = 0.1, epochs: int = 2000, l2: float = 1e-4) -> SoftmaxModel:
    """Fit by full-batch gradient descent.

    Every class in [0, n_classes) must appear in y; a fit that never saw a
    class would silently score it near-uniform, so that is an error here.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if x.ndim != 2 or len(x) != len(y):
        raise ValueError("features must be 2-d and aligned with labels")
    present = np.unique(y)
    missing = sorted(set(range(n_classes)) - set(present.tolist()))
    if missing:
        names = ", ".join(LABEL_NAMES[c] if c < len(LABEL_NAMES) else str(c) for c in missing)
        raise ValueError(f"training data is missing class(es): {names}")
    if present.min() < 0 or present.max() >= n_classes:
        raise ValueError(f"labels outside [0, {n_classes})")

    w = np.zeros((x.shape[1], n_classes))
    b = np.zeros(n_classes)
    history: list[float] = []
    for _ in range(epochs):
        loss, gw, gb = loss_and_grad(w, b, x, y, l2)
        if not np.isfinite(loss):
            raise FloatingPointError(f"non-finite training loss {loss}; lower the learning rate")
        w -= lr * gw
        b -= lr * gb
        history.append(loss)
    return SoftmaxModel(w, b, n_classes, history=history)


def stratified_split(y: np.ndarray, train_fraction: float = 0.7,
                     rng_seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Per-class shuffled split keeping the class balance on both sides.

    Each class contributes round(fraction * count) training rows, clamped so
    both sides keep at least one row; classes with fewer than two rows
    cannot be split and raise.
    """
    if not (0 < train_fraction < 1):
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    y = np.asarray(y)
    rng = np.random.default_rng(rng_seed)
    train_parts: list[np.ndarray] = []
    test_parts: list[np.ndarray] = []
    for cls in np.unique(y):
        rows = np.flatnonzero(y == cls)
        if len(rows) < 2:
            raise ValueError(f"class {cls} has {len(rows)} sample(s); need at least 2 to split")
        rows = rng.permutation(rows)
        n_train = int(round(train_fraction * len(rows)))
        n_train = min(max(n_train, 1), len(rows) - 1)
        train_parts.append(rows[:n_train])
        test_parts.append(rows[n_train:])
    return np.sort(np.concatenate(train_parts)), np.sort(np.concatenate(test_parts))
