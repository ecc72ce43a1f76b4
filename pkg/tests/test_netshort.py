import numpy as np
import pytest

import oracles
from conftest import random_connected_graph, random_seed_set
from netpu.features import netshort, netshort_edge_weights, scaled_scores
from netpu.graph import build_graph
from netpu.seeds import make_seed_set


def test_two_seeds_unit_weight():
    g = build_graph([("a", "b")])
    s = make_seed_set(np.array([0, 1]), np.array([0.4, 0.4]), 2)
    np.testing.assert_allclose(netshort(g, s), [1.0, 1.0], rtol=0, atol=0)


def test_two_nonseeds_floor_weight():
    # the scored pair sits on a separate edge so a and b both take the
    # off-seed floor 0.5 * 0.3/0.6 = 0.25, giving edge weight 4
    g = build_graph([("a", "b"), ("c", "d")])
    s = make_seed_set(np.array([2, 3]), np.array([0.3, 0.6]), 4)
    ns = netshort(g, s, alpha_ns=0.5)
    assert ns[0] == pytest.approx(0.25, abs=0)
    assert ns[1] == pytest.approx(0.25, abs=0)


def test_path_hand_dijkstra():
    # a-b-c all at the uniform floor q: each edge weighs 1/q, so
    # NS_a = q + q/2; the scored pair d-e is unreachable and contributes 0
    g = build_graph([("a", "b"), ("b", "c"), ("d", "e")])
    s = make_seed_set(np.array([3, 4]), np.array([0.5, 0.5]), 5)
    q = 0.5  # alpha_ns * s_min / s_max
    ns = netshort(g, s, alpha_ns=0.5)
    assert ns[0] == pytest.approx(q + q / 2, abs=1e-15)
    assert ns[1] == pytest.approx(q + q, abs=1e-15)
    assert ns[2] == pytest.approx(q + q / 2, abs=1e-15)


def test_scaled_scores_values():
    g = build_graph([("a", "b"), ("b", "c")])
    s = make_seed_set(np.array([0]), np.array([0.8]), 3)
    st = scaled_scores(g, s, alpha_ns=0.5)
    assert st.tolist() == [1.0, 0.5, 0.5]


def test_edge_weights_align_with_csr():
    rng = np.random.default_rng(20)
    g = random_connected_graph(rng, 30, 0.15)
    s = random_seed_set(rng, g, 5)
    w = netshort_edge_weights(g, s, 0.5)
    st = scaled_scores(g, s, 0.5)
    rows = np.repeat(np.arange(g.n_nodes), g.degrees)
    np.testing.assert_array_equal(w, 2.0 / (st[rows] + st[g.indices]))


def test_matches_floyd_warshall_oracle():
    rng = np.random.default_rng(21)
    for _ in range(12):
        n = int(rng.integers(3, 100))
        g = random_connected_graph(rng, n, 0.1)
        s = random_seed_set(rng, g, max(1, n // 6))
        mine = netshort(g, s, alpha_ns=0.5)
        ref = oracles.netshort_reference(g, s, alpha_ns=0.5)
        np.testing.assert_allclose(mine, ref, rtol=0, atol=1e-12)


def test_unreachable_contributes_zero():
    g = build_graph([("a", "b"), ("x", "y"), ("y", "z")])
    s = make_seed_set(np.array([0, 1]), np.array([0.5, 1.0]), 5)
    ns = netshort(g, s)
    ref = oracles.netshort_reference(g, s)
    np.testing.assert_allclose(ns, ref, rtol=0, atol=1e-12)
    assert ns[2] > 0  # x still reaches y and z


def test_parallel_matches_serial():
    rng = np.random.default_rng(22)
    g = random_connected_graph(rng, 120, 0.08)
    s = random_seed_set(rng, g, 10)
    serial = netshort(g, s, threads=1)
    parallel = netshort(g, s, threads=4)
    assert serial.tobytes() == parallel.tobytes()


def test_alpha_ns_range():
    g = build_graph([("a", "b")])
    s = make_seed_set(np.array([0]), np.array([0.5]), 2)
    with pytest.raises(ValueError):
        netshort(g, s, alpha_ns=0.0)
    with pytest.raises(ValueError):
        netshort(g, s, alpha_ns=1.5)
