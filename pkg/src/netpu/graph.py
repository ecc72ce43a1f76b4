"""Immutable sparse undirected graph with interned node names.

Node names are arbitrary strings; dense integer ids are assigned in
first-seen order at ingestion and all numerics run on ids. The adjacency is
stored in CSR form (symmetric, self-loop free, no duplicate edges) with each
neighbor list sorted ascending.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from netpu import kernels


class Graph:
    """CSR graph; treat as immutable after construction."""

    __slots__ = ("node_names", "indptr", "indices", "degrees", "_name_to_id")

    def __init__(self, node_names: Sequence[str], indptr: np.ndarray, indices: np.ndarray):
        self.node_names = list(node_names)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int32)
        self.degrees = np.diff(self.indptr).astype(np.int64)
        self._name_to_id = {name: i for i, name in enumerate(self.node_names)}
        if len(self._name_to_id) != len(self.node_names):
            raise ValueError("duplicate node names")

    @property
    def n_nodes(self) -> int:
        return len(self.node_names)

    @property
    def n_edges(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def id_of(self, name: str) -> int:
        return self._name_to_id[name]

    def __contains__(self, name: str) -> bool:
        return name in self._name_to_id

    def edges(self) -> Iterator[tuple[str, str]]:
        """Each undirected edge once, as (name_u, name_v) with id(u) < id(v)."""
        for u in range(self.n_nodes):
            for v in self.neighbors(u):
                if u < v:
                    yield self.node_names[u], self.node_names[int(v)]

    def adjacency_matrix(self) -> sp.csr_matrix:
        """Binary adjacency as a scipy CSR matrix."""
        data = np.ones(len(self.indices))
        return sp.csr_matrix(
            (data, self.indices.astype(np.int64), self.indptr),
            shape=(self.n_nodes, self.n_nodes),
        )

    def is_connected(self) -> bool:
        if self.n_nodes == 0:
            return True
        levels = kernels.bfs_levels(self.indptr, self.indices, np.array([0], dtype=np.int64))
        return bool((levels >= 0).all())


def build_graph(edges: Iterable[tuple[str, str]]) -> Graph:
    """Build a deduplicated, symmetrized, self-loop-free graph.

    Names are interned in first-seen order; nodes appearing only in
    self-loops are kept as isolated nodes.
    """
    name_to_id: dict[str, int] = {}
    names: list[str] = []
    pair_set: set[tuple[int, int]] = set()
    n_raw = 0
    for a, b in edges:
        n_raw += 1
        ia = name_to_id.get(a)
        if ia is None:
            ia = len(names)
            name_to_id[a] = ia
            names.append(a)
        ib = name_to_id.get(b)
        if ib is None:
            ib = len(names)
            name_to_id[b] = ib
            names.append(b)
        if ia == ib:
            continue
        pair_set.add((ia, ib) if ia < ib else (ib, ia))
    if n_raw == 0:
        raise ValueError("no edges")

    n = len(names)
    if pair_set:
        pairs = np.array(sorted(pair_set), dtype=np.int64)
        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        indices = cols.astype(np.int32)
    else:
        indptr = np.zeros(n + 1, dtype=np.int64)
        indices = np.empty(0, dtype=np.int32)
    return Graph(names, indptr, indices)


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component, ids re-densified.

    Equal-size components tie-break to the one containing the smallest node
    id (labels are assigned in id scan order, so that is the smallest label).
    """
    labels = kernels.component_labels(g.indptr, g.indices)
    sizes = np.bincount(labels)
    best = int(np.argmax(sizes))  # first max = smallest label = smallest min id
    keep = np.flatnonzero(labels == best)
    if len(keep) == g.n_nodes:
        return g
    new_id = np.full(g.n_nodes, -1, dtype=np.int64)
    new_id[keep] = np.arange(len(keep))
    names = [g.node_names[int(i)] for i in keep]
    indptr = np.zeros(len(keep) + 1, dtype=np.int64)
    chunks = []
    for new_u, old_u in enumerate(keep):
        nbrs = new_id[g.neighbors(int(old_u))]
        chunks.append(nbrs[nbrs >= 0])
        indptr[new_u + 1] = indptr[new_u] + len(chunks[-1])
    indices = (
        np.concatenate(chunks).astype(np.int32) if chunks else np.empty(0, dtype=np.int32)
    )
    return Graph(names, indptr, indices)
