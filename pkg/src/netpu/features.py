"""Score-informed topological features and the assembled feature matrix.

NetShort is a weighted harmonic centrality: edge (i, j) costs
``2 / (st_i + st_j)`` where ``st`` is the seed score scaled by max S on seed
nodes and a penalized floor ``alpha_ns * min S / max S`` elsewhere, so walks
through high-score seeds are cheap. NetRing partitions nodes into rings by
minimal hop distance from the seed set and propagates a rank outward ring by
ring.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from netpu import kernels
from netpu.diffusion import balanced_diffusion, heat_diffusion
from netpu.graph import Graph
from netpu.seeds import SeedSet

FEATURE_COLUMNS = ("heat", "balanced", "netshort", "netring")
DEFAULT_TRANSFORMS = (True, True, False, False)  # log1p on the diffusion columns


def scaled_scores(g: Graph, s: SeedSet, alpha_ns: float) -> np.ndarray:
    """Per-node normalized score: s_i / max S on seeds, penalized floor off."""
    if not (0 < alpha_ns <= 1):
        raise ValueError(f"alpha_ns must be in (0, 1], got {alpha_ns}")
    st = np.full(g.n_nodes, alpha_ns * s.s_min / s.s_max)
    st[s.ids] = s.scores / s.s_max
    return st


def netshort_edge_weights(g: Graph, s: SeedSet, alpha_ns: float) -> np.ndarray:
    """Edge costs aligned with the CSR index array."""
    st = scaled_scores(g, s, alpha_ns)
    rows = np.repeat(np.arange(g.n_nodes), g.degrees)
    return 2.0 / (st[rows] + st[g.indices])


def netshort(g: Graph, s: SeedSet, alpha_ns: float = 0.5,
             threads: int | None = None) -> np.ndarray:
    """Harmonic sum of inverse weighted shortest-path distances per node.

    Unreachable pairs contribute 0. One Dijkstra per source; sources write
    disjoint output slots, so threading cannot change the result.
    """
    weights = netshort_edge_weights(g, s, alpha_ns)
    n = g.n_nodes
    out = np.zeros(n)
    indptr, indices = g.indptr, g.indices

    def run_block(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            dist = kernels.sssp_dijkstra(indptr, indices, weights, i)
            inv = np.zeros(n)
            finite = np.isfinite(dist)
            finite[i] = False
            inv[finite] = 1.0 / dist[finite]
            out[i] = inv.sum()

    workers = threads if threads and threads > 0 else (os.cpu_count() or 1)
    if workers <= 1 or n < 64:
        run_block(0, n)
        return out
    block = -(-n // (workers * 4))
    bounds = [(lo, min(lo + block, n)) for lo in range(0, n, block)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda b: run_block(*b), bounds))
    return out


@dataclass(frozen=True)
class RingPartition:
    """Nodes grouped by minimal hop distance to the seed set."""

    levels: np.ndarray  # per-node level; seeds are level 0
    rings: list[np.ndarray]  # rings[l] = sorted node ids at level l

    @property
    def max_level(self) -> int:
        return len(self.rings) - 1


def ring_partition(g: Graph, s: SeedSet) -> RingPartition:
    """Multi-source BFS levels from the seed set; ring 0 is the seed set."""
    levels = kernels.bfs_levels(g.indptr, g.indices, s.ids.astype(np.int64))
    if (levels < 0).any():
        raise ValueError("graph has nodes unreachable from the seed set")
    n_rings = int(levels.max()) + 1
    rings = [np.flatnonzero(levels == l) for l in range(n_rings)]
    return RingPartition(levels, rings)


def netring(g: Graph, s: SeedSet, rp: RingPartition | None = None,
            alpha_nr: float = 0.5) -> np.ndarray:
    """Ring-recursive rank: seeds mix their initial rank with the neighbor
    mean; ring l nodes add l to the degree-average of same-or-higher-ring
    initial ranks plus level-corrected lower-ring ranks."""
    if not (0 <= alpha_nr <= 1):
        raise ValueError(f"alpha_nr must be in [0, 1], got {alpha_nr}")
    if rp is None:
        rp = ring_partition(g, s)
    n = g.n_nodes
    hr = np.ones(n)
    hr[s.ids] = 1.0 - s.scores / s.s_max

    rank = np.zeros(n)
    deg = g.degrees.astype(np.float64)
    # seed rank: convex mix of own initial rank and neighbor-mean initial rank
    nbr_mean = np.zeros(n)
    adj = g.adjacency_matrix()
    has_nbrs = deg > 0
    nbr_mean[has_nbrs] = (adj @ hr)[has_nbrs] / deg[has_nbrs]
    rank[s.ids] = alpha_nr * hr[s.ids] + (1.0 - alpha_nr) * nbr_mean[s.ids]

    levels, indptr, indices = rp.levels, g.indptr, g.indices
    for level in range(1, rp.max_level + 1):
        below = level - 1
        for i in rp.rings[level]:
            nbrs = indices[indptr[i] : indptr[i + 1]]
            lower = levels[nbrs] == below
            correction = rank[nbrs[lower]] - below  # per lower-ring neighbor
            rank[i] = level + (hr[nbrs[~lower]].sum() + correction.sum()) / deg[i]
    return rank


@dataclass(frozen=True)
class FeatureMatrix:
    """n x 4 feature matrix, per-column transformed then min-max scaled."""

    values: np.ndarray  # normalized, every entry in [0, 1]
    raw: np.ndarray  # pre-transform column values
    col_min: np.ndarray  # post-transform minima used for scaling
    col_max: np.ndarray
    transforms: tuple[bool, ...]  # per-column log1p flag

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.values.shape[0]


def normalize_columns(raw: np.ndarray, transforms: tuple[bool, ...]) -> FeatureMatrix:
    if raw.shape[1] != len(transforms):
        raise ValueError("one transform flag per column required")
    work = raw.astype(np.float64).copy()
    for j, flag in enumerate(transforms):
        if flag:
            work[:, j] = np.log1p(work[:, j])
    col_min = work.min(axis=0)
    col_max = work.max(axis=0)
    if (col_min >= col_max).any():
        bad = int(np.flatnonzero(col_min >= col_max)[0])
        raise ValueError(f"degenerate feature: column {bad} is constant")
    values = (work - col_min) / (col_max - col_min)
    return FeatureMatrix(values, raw, col_min, col_max, tuple(transforms))


def assemble_features(g: Graph, s: SeedSet, t: float = 0.005,
                      alpha_ns: float = 0.5, alpha_nr: float = 0.5,
                      transforms: tuple[bool, ...] = DEFAULT_TRANSFORMS,
                      threads: int | None = None) -> FeatureMatrix:
    """Compute the four feature columns and normalize each into [0, 1]."""
    rp = ring_partition(g, s)
    raw = np.column_stack(
        [
            heat_diffusion(g, s, t),
            balanced_diffusion(g, s, t),
            netshort(g, s, alpha_ns, threads=threads),
            netring(g, s, rp, alpha_nr),
        ]
    )
    return normalize_columns(raw, transforms)
