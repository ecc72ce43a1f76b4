"""Time the compiled graph kernels against the pure-Python fallback.

Both backends expose the same three functions and must return identical
arrays; this script confirms that and reports wall-clock speedups on a
random graph sized from the command line.

Usage: python3 benchmarks/compare_backends.py [n_nodes] [avg_degree]
"""

import sys
import time

import numpy as np

from netpu import _fallback
from netpu.features import netshort_edge_weights
from netpu.graph import build_graph, largest_connected_component
from netpu.seeds import make_seed_set

try:
    from netpu import _speedups
except ImportError:
    _speedups = None


def random_graph(rng, n, avg_degree):
    m = n * avg_degree // 2
    pairs = rng.integers(0, n, (m, 2))
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    names = {i: f"v{i}" for i in range(n)}
    g = build_graph([(names[a], names[b]) for a, b in pairs.tolist()])
    return largest_connected_component(g)


def bench(fn, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main(argv):
    n = int(argv[0]) if argv else 3000
    avg_degree = int(argv[1]) if len(argv) > 1 else 12
    rng = np.random.default_rng(0)
    g = random_graph(rng, n, avg_degree)
    k = max(1, g.n_nodes // 20)
    seed_ids = np.sort(rng.choice(g.n_nodes, k, replace=False))
    seeds = make_seed_set(seed_ids, rng.uniform(0.3, 1.0, k))
    weights = netshort_edge_weights(g, seeds, 0.5)
    sources = np.sort(rng.choice(g.n_nodes, 50, replace=False)).astype(np.int64)

    print(f"graph: {g.n_nodes} nodes, {g.n_edges} edges, {len(seeds)} seeds")
    if _speedups is None:
        print("compiled extension not built; showing fallback timings only")
    backends = [("python", _fallback)] + ([("compiled", _speedups)] if _speedups else [])

    cases = {
        "dijkstra x50": lambda impl: [
            impl.sssp_dijkstra(g.indptr, g.indices, weights, int(s)) for s in sources],
        "bfs levels": lambda impl: impl.bfs_levels(g.indptr, g.indices, seed_ids.astype(np.int64)),
        "components": lambda impl: impl.component_labels(g.indptr, g.indices),
    }
    for case, run in cases.items():
        results = {}
        times = {}
        for name, impl in backends:
            times[name], results[name] = bench(lambda: run(impl))
        if len(results) == 2:
            a, b = results["python"], results["compiled"]
            if isinstance(a, list):
                same = all(np.array_equal(x, y) for x, y in zip(a, b))
            else:
                same = np.array_equal(a, b)
            ratio = times["python"] / times["compiled"]
            print(f"{case:14s} python {times['python'] * 1e3:9.1f} ms   "
                  f"compiled {times['compiled'] * 1e3:9.1f} ms   "
                  f"speedup {ratio:6.1f}x   identical={same}")
            if not same:
                raise SystemExit(f"backend mismatch in {case}")
        else:
            print(f"{case:14s} python {times['python'] * 1e3:9.1f} ms")


if __name__ == "__main__":
    main(sys.argv[1:])
