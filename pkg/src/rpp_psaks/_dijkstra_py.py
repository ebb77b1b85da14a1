"""Pure-Python single-source shortest paths from many sources.

Reference implementation of the compiled ``_dijkstra`` extension; both must
return identical arrays.
"""
from heapq import heappop, heappush

import numpy as np


def sssp_many(indptr, indices, weights, sources):
    """Dijkstra from every vertex in ``sources`` over a CSR graph.

    Returns ``(dist, pred)`` of shape ``(len(sources), n)``.  Unreachable
    entries are -1.  Vertices are settled in ``(distance, id)`` order and a
    vertex's predecessor is the smallest-id settled vertex offering its
    final distance.
    """
    n = len(indptr) - 1
    k = len(sources)
    dist_out = np.full((k, n), -1, dtype=np.int64)
    pred_out = np.full((k, n), -1, dtype=np.int32)
    ip = np.asarray(indptr).tolist()
    ind = np.asarray(indices).tolist()
    wt = np.asarray(weights).tolist()
    for row, s in enumerate(np.asarray(sources).tolist()):
        dist = [-1] * n
        pred = [-1] * n
        done = [False] * n
        dist[s] = 0
        heap = [(0, s)]
        while heap:
            du, u = heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for j in range(ip[u], ip[u + 1]):
                w = ind[j]
                if done[w]:
                    continue
                nd = du + wt[j]
                dw = dist[w]
                if dw < 0 or nd < dw:
                    dist[w] = nd
                    pred[w] = u
                    heappush(heap, (nd, w))
                elif nd == dw and u < pred[w]:
                    pred[w] = u
        dist_out[row] = dist
        pred_out[row] = pred
    return dist_out, pred_out
