import numpy as np

from netpu.graph import Graph, build_graph, largest_connected_component
from netpu.seeds import SeedSet, make_seed_set


def random_connected_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    """G(n, p) plus a random spanning path so the result is connected."""
    names = [f"n{i}" for i in range(n)]
    perm = rng.permutation(n)
    edges = [(names[a], names[b]) for a, b in zip(perm[:-1], perm[1:])]
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    edges.extend((names[a], names[b]) for a, b in zip(iu[keep], ju[keep]))
    return build_graph(edges)


def random_seed_set(rng: np.random.Generator, g: Graph, k: int,
                    low: float = 0.1, high: float = 1.0) -> SeedSet:
    ids = np.sort(rng.choice(g.n_nodes, size=k, replace=False))
    return make_seed_set(ids, rng.uniform(low, high, size=k), g.n_nodes)


def planted_partition(fixture_seed: int, n_comm: int = 500, p_in: float = 0.05,
                      p_out: float = 0.005, n_seeds: int = 100):
    """Two communities; seeds drawn from the first. Returns (graph, seeds, comm1 mask)."""
    rng = np.random.default_rng(fixture_seed)
    n = 2 * n_comm
    iu, ju = np.triu_indices(n, k=1)
    same = (iu < n_comm) == (ju < n_comm)
    keep = rng.random(len(iu)) < np.where(same, p_in, p_out)
    names = [f"v{i}" for i in range(n)]
    g = largest_connected_component(build_graph(
        [(names[a], names[b]) for a, b in zip(iu[keep], ju[keep])]))
    in_comm1 = np.array([int(name[1:]) < n_comm for name in g.node_names])
    comm1 = np.flatnonzero(in_comm1)
    chosen = np.sort(rng.choice(comm1, n_seeds, replace=False))
    seeds = make_seed_set(chosen, rng.uniform(0.3, 1.0, n_seeds), g.n_nodes)
    return g, seeds, in_comm1
