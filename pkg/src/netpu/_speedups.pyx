# cython: language_level=3
"""Compiled CSR graph kernels: Dijkstra, multi-source BFS, component labeling.

Mirrors the API of ``netpu._fallback`` exactly; both backends must produce
bitwise-identical results (same relaxation order, same tie rule).
"""

import numpy as np

cimport cython
cimport numpy as cnp

cnp.import_array()


cdef inline bint _heap_less(double da, long na, double db, long nb) nogil:
    # (dist, node id) lexicographic; the id tie rule keeps backends in lockstep
    return da < db or (da == db and na < nb)


cdef void _heap_push(double* hd, long* hn, Py_ssize_t* size, double d, long node) nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t parent
    hd[i] = d
    hn[i] = node
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _heap_less(hd[i], hn[i], hd[parent], hn[parent]):
            hd[i], hd[parent] = hd[parent], hd[i]
            hn[i], hn[parent] = hn[parent], hn[i]
            i = parent
        else:
            break


cdef void _heap_pop(double* hd, long* hn, Py_ssize_t* size, double* d_out, long* n_out) nogil:
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t child, last
    d_out[0] = hd[0]
    n_out[0] = hn[0]
    size[0] -= 1
    last = size[0]
    if last == 0:
        return
    hd[0] = hd[last]
    hn[0] = hn[last]
    while True:
        child = 2 * i + 1
        if child >= last:
            break
        if child + 1 < last and _heap_less(hd[child + 1], hn[child + 1], hd[child], hn[child]):
            child += 1
        if _heap_less(hd[child], hn[child], hd[i], hn[i]):
            hd[i], hd[child] = hd[child], hd[i]
            hn[i], hn[child] = hn[child], hn[i]
            i = child
        else:
            break


def sssp_dijkstra(cnp.int64_t[::1] indptr, cnp.int32_t[::1] indices,
                  cnp.float64_t[::1] weights, long source):
    """Single-source shortest paths on a CSR graph with positive edge weights.

    Returns a float64 distance array; unreachable nodes hold +inf.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dist_arr = np.full(n, np.inf)
    cdef double[::1] dist = dist_arr
    # lazy-deletion heap: each edge relaxation may push once
    cdef Py_ssize_t cap = indices.shape[0] + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] hd_arr = np.empty(cap)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hn_arr = np.empty(cap, dtype=np.int64)
    cdef double[::1] hd = hd_arr
    cdef cnp.int64_t[::1] hn = hn_arr
    cdef Py_ssize_t size = 0
    cdef double d, nd
    cdef long u, v
    cdef Py_ssize_t k

    if source < 0 or source >= n:
        raise ValueError(f"source {source} out of range for {n} nodes")

    with nogil:
        dist[source] = 0.0
        _heap_push(&hd[0], <long*> &hn[0], &size, 0.0, source)
        while size > 0:
            _heap_pop(&hd[0], <long*> &hn[0], &size, &d, &u)
            if d > dist[u]:
                continue
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                nd = d + weights[k]
                if nd < dist[v]:
                    dist[v] = nd
                    _heap_push(&hd[0], <long*> &hn[0], &size, nd, v)
    return dist_arr


def bfs_levels(cnp.int64_t[::1] indptr, cnp.int32_t[::1] indices,
               cnp.int64_t[::1] sources):
    """Multi-source BFS hop levels; sources get 0, unreached nodes -1."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.int32_t, ndim=1] level_arr = np.full(n, -1, dtype=np.int32)
    cdef cnp.int32_t[::1] level = level_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] queue_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0
    cdef Py_ssize_t i, k
    cdef long s, u, v

    for i in range(sources.shape[0]):
        s = sources[i]
        if s < 0 or s >= n:
            raise ValueError(f"source {s} out of range for {n} nodes")
        if level[s] < 0:
            level[s] = 0
            queue[tail] = s
            tail += 1
    with nogil:
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if level[v] < 0:
                    level[v] = level[u] + 1
                    queue[tail] = v
                    tail += 1
    return level_arr


def component_labels(cnp.int64_t[::1] indptr, cnp.int32_t[::1] indices):
    """Connected-component labels assigned in node-id scan order."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.int32_t, ndim=1] label_arr = np.full(n, -1, dtype=np.int32)
    cdef cnp.int32_t[::1] label = label_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] queue_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = queue_arr
    cdef Py_ssize_t head, tail, k
    cdef long i, u, v
    cdef cnp.int32_t comp = 0

    with nogil:
        for i in range(n):
            if label[i] >= 0:
                continue
            label[i] = comp
            queue[0] = i
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if label[v] < 0:
                        label[v] = comp
                        queue[tail] = v
                        tail += 1
            comp += 1
    return label_arr
