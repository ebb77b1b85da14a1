# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled single-source shortest paths from many sources.

Same contract and tie-breaking as ``_dijkstra_py.sssp_many``.
"""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

ctypedef long long i64

cdef struct Entry:
    i64 key
    int v


cdef inline bint _less(Entry a, Entry b) nogil:
    return a.key < b.key or (a.key == b.key and a.v < b.v)


cdef inline void _push(Entry* heap, Py_ssize_t* size, i64 key, int v) nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t parent
    cdef Entry e
    e.key = key
    e.v = v
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _less(e, heap[parent]):
            heap[i] = heap[parent]
            i = parent
        else:
            break
    heap[i] = e


cdef inline Entry _pop(Entry* heap, Py_ssize_t* size) nogil:
    cdef Entry top = heap[0]
    cdef Py_ssize_t n = size[0] - 1
    cdef Entry last = heap[n]
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t c
    size[0] = n
    while True:
        c = 2 * i + 1
        if c >= n:
            break
        if c + 1 < n and _less(heap[c + 1], heap[c]):
            c += 1
        if _less(heap[c], last):
            heap[i] = heap[c]
            i = c
        else:
            break
    if n > 0:
        heap[i] = last
    return top


def sssp_many(indptr, indices, weights, sources):
    cdef cnp.int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int64_t[::1] ind = np.ascontiguousarray(indices, dtype=np.int64)
    cdef cnp.int64_t[::1] wt = np.ascontiguousarray(weights, dtype=np.int64)
    cdef cnp.int64_t[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef Py_ssize_t k = src.shape[0]
    cdef Py_ssize_t m = ind.shape[0]
    dist_arr = np.full((k, n), -1, dtype=np.int64)
    pred_arr = np.full((k, n), -1, dtype=np.int32)
    cdef cnp.int64_t[:, ::1] dist = dist_arr
    cdef cnp.int32_t[:, ::1] pred = pred_arr
    cdef unsigned char* done = <unsigned char*> malloc(n + 1)
    cdef Entry* heap = <Entry*> malloc((m + 2) * sizeof(Entry))
    cdef Py_ssize_t size, row, j
    cdef int u, w, s
    cdef i64 du, nd, dw
    cdef Entry top
    if done == NULL or heap == NULL:
        free(done)
        free(heap)
        raise MemoryError()
    try:
        with nogil:
            for row in range(k):
                s = <int> src[row]
                for j in range(n):
                    done[j] = 0
                dist[row, s] = 0
                size = 0
                _push(heap, &size, 0, s)
                while size > 0:
                    top = _pop(heap, &size)
                    du = top.key
                    u = top.v
                    if done[u]:
                        continue
                    done[u] = 1
                    for j in range(ip[u], ip[u + 1]):
                        w = <int> ind[j]
                        if done[w]:
                            continue
                        nd = du + wt[j]
                        dw = dist[row, w]
                        if dw < 0 or nd < dw:
                            dist[row, w] = nd
                            pred[row, w] = u
                            _push(heap, &size, nd, w)
                        elif nd == dw and u < pred[row, w]:
                            pred[row, w] = u
    finally:
        free(done)
        free(heap)
    return dist_arr, pred_arr
