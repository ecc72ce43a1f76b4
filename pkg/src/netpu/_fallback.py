"""Pure-Python CSR graph kernels, used when the compiled extension is absent.

Algorithms mirror ``netpu._speedups`` step for step (same heap tie rule, same
scan order) so both backends return bitwise-identical arrays.
"""

from collections import deque
from heapq import heappop, heappush

import numpy as np


def sssp_dijkstra(indptr, indices, weights, source):
    """Single-source shortest paths; unreachable nodes hold +inf."""
    n = len(indptr) - 1
    if source < 0 or source >= n:
        raise ValueError(f"source {source} out of range for {n} nodes")
    dist = np.full(n, np.inf)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heappop(heap)
        if d > dist[u]:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            nd = d + weights[k]
            if nd < dist[v]:
                dist[v] = nd
                heappush(heap, (nd, v))
    return dist


def bfs_levels(indptr, indices, sources):
    """Multi-source BFS hop levels; sources get 0, unreached nodes -1."""
    n = len(indptr) - 1
    level = np.full(n, -1, dtype=np.int32)
    queue = deque()
    for s in sources:
        s = int(s)
        if s < 0 or s >= n:
            raise ValueError(f"source {s} out of range for {n} nodes")
        if level[s] < 0:
            level[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        nxt = level[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if level[v] < 0:
                level[v] = nxt
                queue.append(v)
    return level


def component_labels(indptr, indices):
    """Connected-component labels assigned in node-id scan order."""
    n = len(indptr) - 1
    label = np.full(n, -1, dtype=np.int32)
    comp = 0
    queue = deque()
    for i in range(n):
        if label[i] >= 0:
            continue
        label[i] = comp
        queue.append(i)
        while queue:
            u = queue.popleft()
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if label[v] < 0:
                    label[v] = comp
                    queue.append(v)
        comp += 1
    return label
