"""Metric closure of an RPP instance and expansion of metric walks.

``metric_close`` computes shortest-path distances between a terminal set
(normally the vertices incident to required edges) together with predecessor
arrays, so that any edge of the complete metric graph can be expanded back
into a walk of the original graph.

``MetricRpp`` is the working representation used by the reduction rules and
solvers: a complete graph on ``0..k-1`` given by a weight matrix, a required
edge multiset over those ids, and ``labels`` mapping each id back to the
original vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .graph import (
    ClosedWalk,
    EdgeMultiset,
    GraphError,
    RppInstance,
    WeightedMultigraph,
    connected_components,
    imbalanced_vertices,
)


class MetricError(GraphError):
    pass


def _csr(graph: WeightedMultigraph):
    """Symmetric CSR arrays with parallel edges collapsed to their minimum weight."""
    best: dict[tuple[int, int], int] = {}
    for u, v, w, _ in graph.edges:
        if u == v:
            continue
        if (u, v) not in best or w < best[(u, v)]:
            best[(u, v)] = w
    n = graph.vertex_count
    if not best:
        return np.zeros(n + 1, np.int64), np.zeros(0, np.int64), np.zeros(0, np.int64), best
    pairs = np.array(list(best), dtype=np.int64)
    ws = np.array(list(best.values()), dtype=np.int64)
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    wt = np.concatenate([ws, ws])
    order = np.lexsort((dst, src))
    src, dst, wt = src[order], dst[order], wt[order]
    indptr = np.zeros(n + 1, np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst, wt, best


@dataclass(frozen=True, eq=False)
class MetricInstance:
    """Shortest-path metric on a terminal set with path reconstruction data."""

    source: RppInstance
    terminals: tuple[int, ...]
    dist: np.ndarray  # (k, k) distances between terminals
    pred: np.ndarray  # (k, n) predecessor of each vertex on the path from terminal i
    edge_weight: dict  # (u, v) with u < v -> minimum original weight

    @cached_property
    def index(self) -> dict[int, int]:
        return {t: i for i, t in enumerate(self.terminals)}

    def distance(self, u: int, v: int) -> int:
        """Distance between two terminals given by original vertex ids."""
        return int(self.dist[self.index[u], self.index[v]])

    def path(self, u: int, v: int) -> list[int]:
        """Original-graph shortest path from terminal ``u`` to vertex ``v``."""
        row = self.pred[self.index[u]]
        out = [v]
        while out[-1] != u:
            p = int(row[out[-1]])
            if p < 0:
                raise MetricError(f"no path from {u} to {v}")
            out.append(p)
        out.reverse()
        return out

    def original_weight(self, u: int, v: int) -> int:
        return self.edge_weight[(u, v) if u < v else (v, u)]

    @cached_property
    def required_offset(self) -> int:
        """Original required weight minus its metric weight (always >= 0)."""
        idx = self.index
        metric = sum(
            int(self.dist[idx[u], idx[v]]) * m for (u, v, _), m in self.source.required.items()
        )
        return self.source.required.total_weight - metric

    def problem(self) -> MetricRpp:
        """The instance on the complete metric graph over the terminals."""
        idx = self.index
        dist = self.dist
        req = EdgeMultiset(
            {(idx[u], idx[v], int(dist[idx[u], idx[v]])): m for (u, v, _), m in self.source.required.items()}
        )
        return MetricRpp(dist, req, self.terminals)


def metric_close(instance: RppInstance, terminals=None) -> MetricInstance:
    """Shortest-path closure of ``instance`` restricted to ``terminals``.

    ``terminals`` defaults to the vertices incident to required edges.  One
    Dijkstra search is run per terminal.
    """
    if terminals is None:
        terminals = sorted(instance.required.vertices())
    terminals = tuple(sorted(set(int(t) for t in terminals)))
    for t in terminals:
        if not 0 <= t < instance.n:
            raise MetricError(f"terminal {t} is not a vertex")
    missing = instance.required.vertices() - set(terminals)
    if missing:
        raise MetricError(f"required edges touch non-terminal vertex {min(missing)}")
    indptr, indices, weights, best = _csr(instance.graph)
    if not terminals:
        empty = np.zeros((0, 0), np.int64)
        return MetricInstance(instance, (), empty, np.zeros((0, instance.n), np.int32), best)
    full, pred = _kernels.sssp_many(indptr, indices, weights, np.array(terminals, np.int64))
    dist = full[:, list(terminals)]
    bad = np.argwhere(dist < 0)
    if len(bad):
        i, j = (int(x) for x in bad[0])
        comp_i = sorted(int(terminals[x]) for x in np.flatnonzero(dist[i] >= 0))
        comp_j = sorted(int(terminals[x]) for x in np.flatnonzero(dist[j] >= 0))
        raise MetricError(
            f"terminals {terminals[i]} and {terminals[j]} are not connected: "
            f"component containing {comp_i[:5]} vs component containing {comp_j[:5]}"
        )
    dist = np.ascontiguousarray(dist)
    dist.setflags(write=False)
    pred.setflags(write=False)
    return MetricInstance(instance, terminals, dist, pred, best)


def expand_walk(metric: MetricInstance, walk) -> ClosedWalk:
    """Replace every step of a walk over terminals by its shortest path.

    ``walk`` is a :class:`ClosedWalk` or a vertex sequence, in original ids.
    The result has the same weight as the walk measured in the metric.
    """
    verts = list(walk.vertices) if isinstance(walk, ClosedWalk) else list(walk)
    if not verts:
        return ClosedWalk((), ())
    out_v = [verts[0]]
    out_e = []
    for a, b in zip(verts, verts[1:]):
        if a == b:
            continue
        for x, y in _pairwise(metric.path(a, b)):
            out_v.append(y)
            out_e.append((x, y, metric.original_weight(x, y)))
    if len(out_v) == 1:
        return ClosedWalk((), ())
    return ClosedWalk(tuple(out_v), tuple(out_e))


def _pairwise(seq):
    return zip(seq, seq[1:])


@dataclass(frozen=True, eq=False)
class MetricRpp:
    """RPP instance on a complete graph with weights ``dist``.

    Required edges are stored with their ``dist`` weight.  ``labels[i]`` is
    the original vertex behind id ``i``.
    """

    dist: np.ndarray
    required: EdgeMultiset
    labels: tuple[int, ...]

    def __post_init__(self):
        k = self.dist.shape[0]
        if self.dist.shape != (k, k):
            raise MetricError("weight matrix must be square")
        if len(self.labels) != k:
            raise MetricError("one label per vertex required")
        for u, v, w in self.required.keys():
            if v >= k:
                raise MetricError(f"required edge ({u}, {v}) outside the vertex range")
            if w != int(self.dist[u, v]) and u != v:
                raise MetricError(f"required edge ({u}, {v}) has weight {w}, matrix says {self.dist[u, v]}")

    @classmethod
    def from_matrix(cls, dist, required_pairs, labels=None, validate: bool = True) -> MetricRpp:
        """Build from a weight matrix and unweighted required pairs."""
        d = np.array(dist, dtype=np.int64)
        if validate:
            check_metric(d)
        d.setflags(write=False)
        req = EdgeMultiset.from_pairs(required_pairs, lambda u, v: d[u, v])
        return cls(d, req, tuple(labels) if labels is not None else tuple(range(d.shape[0])))

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def w(self, u: int, v: int) -> int:
        return int(self.dist[u, v])

    def edge(self, u: int, v: int):
        return (u, v, int(self.dist[u, v])) if u <= v else (v, u, int(self.dist[u, v]))

    def edges_from_pairs(self, pairs) -> EdgeMultiset:
        return EdgeMultiset.from_pairs(pairs, self.w)

    @cached_property
    def b(self) -> int:
        return imbalanced_vertices(self.required)[1]

    @cached_property
    def c(self) -> int:
        return connected_components(self.required)[1]

    def with_required(self, required: EdgeMultiset) -> MetricRpp:
        return MetricRpp(self.dist, required, self.labels)

    def restrict(self, keep) -> MetricRpp:
        """Sub-instance on the ids in ``keep`` (relabelled in ascending order)."""
        keep = sorted(keep)
        pos = {x: i for i, x in enumerate(keep)}
        if any(x not in pos for x in self.required.vertices()):
            raise MetricError("cannot drop a vertex incident to a required edge")
        sub = np.ascontiguousarray(self.dist[np.ix_(keep, keep)])
        sub.setflags(write=False)
        return MetricRpp(sub, self.required.relabel(pos), tuple(self.labels[x] for x in keep))

    def to_instance(self, name: str = "") -> RppInstance:
        """Explicit complete graph (one non-required edge per pair) plus R."""
        k = self.n
        iu, ju = np.triu_indices(k, 1)
        edges = [(int(a), int(b), int(self.dist[a, b]), 1) for a, b in zip(iu, ju)]
        edges += [(u, v, w, m) for (u, v, w), m in self.required.items()]
        return RppInstance(WeightedMultigraph(k, tuple(edges)), self.required, name)

    def stats(self) -> dict[str, int]:
        return {
            "V": self.n,
            "VR": len(self.required.vertices()),
            "R": len(self.required),
            "b": self.b,
            "c": self.c,
            "wR": self.required.total_weight,
        }


def check_metric(dist: np.ndarray) -> None:
    """Raise MetricError unless ``dist`` is a symmetric non-negative metric."""
    d = np.asarray(dist, dtype=np.int64)
    k = d.shape[0]
    if d.ndim != 2 or d.shape != (k, k):
        raise MetricError("weight matrix must be square")
    if (d < 0).any():
        raise MetricError("negative weight")
    if not np.array_equal(d, d.T):
        raise MetricError("weight matrix is not symmetric")
    if k and np.diagonal(d).any():
        raise MetricError("non-zero self distance")
    for m in range(k):
        viol = d > d[:, m, None] + d[None, m, :]
        if viol.any():
            u, v = (int(x) for x in np.argwhere(viol)[0])
            raise MetricError(f"triangle inequality violated: w({u},{v}) > w({u},{m}) + w({m},{v})")
