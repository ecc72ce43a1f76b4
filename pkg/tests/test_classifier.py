import numpy as np
import pytest

from netpu.classifier import (SoftmaxModel, loss_and_grad, stratified_split,
                              train)


def _blobs(rng, n_per=60, spread=0.25):
    centers = np.array([
        [0, 0, 0, 0], [4, 0, 0, 0], [0, 4, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4],
    ], dtype=np.float64)
    x = np.concatenate([c + rng.normal(0, spread, (n_per, 4)) for c in centers])
    y = np.repeat(np.arange(5), n_per)
    return x, y


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(70)
    h = 1e-6
    for _ in range(8):
        n, d, k = int(rng.integers(4, 20)), int(rng.integers(2, 6)), 5
        x = rng.normal(size=(n, d))
        y = rng.integers(0, k, size=n)
        w = rng.normal(size=(d, k)) * 0.5
        b = rng.normal(size=k) * 0.5
        _, gw, gb = loss_and_grad(w, b, x, y, l2=1e-3)
        for _ in range(6):
            i, j = rng.integers(0, d), rng.integers(0, k)
            wp, wm = w.copy(), w.copy()
            wp[i, j] += h
            wm[i, j] -= h
            num = (loss_and_grad(wp, b, x, y, 1e-3)[0]
                   - loss_and_grad(wm, b, x, y, 1e-3)[0]) / (2 * h)
            assert abs(num - gw[i, j]) <= 1e-4 * max(1.0, abs(num))
        for j in range(k):
            bp, bm = b.copy(), b.copy()
            bp[j] += h
            bm[j] -= h
            num = (loss_and_grad(w, bp, x, y, 1e-3)[0]
                   - loss_and_grad(w, bm, x, y, 1e-3)[0]) / (2 * h)
            assert abs(num - gb[j]) <= 1e-4 * max(1.0, abs(num))


def test_separable_blobs_high_accuracy():
    rng = np.random.default_rng(71)
    x, y = _blobs(rng)
    train_idx, test_idx = stratified_split(y, 0.7, rng_seed=0)
    model = train(x[train_idx], y[train_idx])
    accuracy = (model.predict(x[test_idx]) == y[test_idx]).mean()
    assert accuracy >= 0.98


def test_zero_epochs_predicts_first_class():
    rng = np.random.default_rng(72)
    x, y = _blobs(rng, n_per=20)
    model = train(x, y, epochs=0)
    preds = model.predict(x)
    assert (preds == 0).all()  # all-zero logits tie, argmax takes class 0
    assert (preds == y).mean() == pytest.approx(0.2)  # balanced five classes


def test_missing_class_rejected():
    rng = np.random.default_rng(73)
    x = rng.normal(size=(20, 3))
    y = np.array([0, 1, 2, 3] * 5)  # class 4 (RN) absent
    with pytest.raises(ValueError, match="RN"):
        train(x, y)


def test_divergence_reported():
    rng = np.random.default_rng(74)
    x, y = _blobs(rng, n_per=10)
    x = x * 1e4
    with np.errstate(over="ignore"), pytest.raises(FloatingPointError):
        train(x, y, lr=1e9, epochs=50)


def test_training_deterministic():
    rng = np.random.default_rng(75)
    x, y = _blobs(rng, n_per=15)
    a = train(x, y, epochs=100)
    b = train(x, y, epochs=100)
    assert a.weights.tobytes() == b.weights.tobytes()
    assert a.bias.tobytes() == b.bias.tobytes()


def test_duplicated_data_same_model():
    rng = np.random.default_rng(76)
    x, y = _blobs(rng, n_per=12)
    a = train(x, y, epochs=200)
    b = train(np.concatenate([x, x]), np.concatenate([y, y]), epochs=200)
    np.testing.assert_allclose(a.weights, b.weights, rtol=1e-9, atol=1e-12)


def test_loss_history_decreases():
    rng = np.random.default_rng(77)
    x, y = _blobs(rng, n_per=15)
    model = train(x, y, epochs=300)
    assert model.history[-1] < model.history[0]


def test_predict_proba_rows_sum_to_one():
    rng = np.random.default_rng(78)
    x, y = _blobs(rng, n_per=10)
    model = train(x, y, epochs=50)
    p = model.predict_proba(x)
    np.testing.assert_allclose(p.sum(axis=1), 1.0, rtol=0, atol=1e-12)
    assert (p >= 0).all()


def test_stratified_split_properties():
    y = np.array([0] * 10 + [1] * 20 + [2] * 5 + [3] * 7 + [4] * 8)
    train_idx, test_idx = stratified_split(y, 0.7, rng_seed=3)
    assert set(train_idx) | set(test_idx) == set(range(len(y)))
    assert set(train_idx).isdisjoint(test_idx)
    for cls, count in zip(*np.unique(y, return_counts=True)):
        got = (y[train_idx] == cls).sum()
        assert got == int(np.clip(round(0.7 * count), 1, count - 1))
    again = stratified_split(y, 0.7, rng_seed=3)
    assert train_idx.tolist() == again[0].tolist()


def test_stratified_split_small_class_rejected():
    y = np.array([0, 0, 1])
    with pytest.raises(ValueError, match="class 1"):
        stratified_split(y, 0.5)


def test_stratified_split_fraction_validated():
    y = np.array([0, 0, 1, 1])
    with pytest.raises(ValueError):
        stratified_split(y, 1.0)


def test_model_decision_shape():
    model = SoftmaxModel(np.zeros((3, 5)), np.zeros(5), 5)
    assert model.decision(np.zeros((7, 3))).shape == (7, 5)
