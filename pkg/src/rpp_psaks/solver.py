"""Eulerian extensions on metric instances.

An Eulerian extension (EE) of an instance is an edge multiset ``S`` such that
the graph induced by ``R + S`` is connected and every vertex has even degree.
Tours and EEs convert into each other with ``w(tour) = w(R) + w(S)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import (
    ClosedWalk,
    EdgeMultiset,
    GraphError,
    connected_components,
    euler_tour,
    imbalanced_vertices,
)
from .matching import min_weight_perfect_matching
from .metric import MetricRpp


class InvalidSolution(GraphError):
    pass


@dataclass(frozen=True)
class EEReport:
    """Outcome of :func:`verify_ee`; ``ok`` is False with a reason otherwise."""

    ok: bool
    reason: str = ""
    vertex: int | None = None
    components: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_ee(problem: MetricRpp, S: EdgeMultiset) -> EEReport:
    """Check that ``R + S`` induces a connected, balanced graph."""
    for u, v, w in S.keys():
        if v >= problem.n:
            return EEReport(False, f"edge ({u}, {v}) uses a vertex outside the instance", vertex=v)
        if w != problem.w(u, v) and u != v:
            return EEReport(False, f"edge ({u}, {v}) has weight {w}, instance says {problem.w(u, v)}")
    union = problem.required + S
    odd, _ = imbalanced_vertices(union)
    if odd:
        return EEReport(False, f"vertex {odd[0]} is imbalanced", vertex=odd[0])
    comp, c = connected_components(union)
    if c > 1:
        reps: dict[int, int] = {}
        for x, i in comp.items():
            reps.setdefault(i, x)
        return EEReport(
            False,
            f"not connected: vertices {reps[0]} and {reps[1]} lie in different components",
            components=(reps[0], reps[1]),
        )
    return EEReport(True)


def connecting_set(problem: MetricRpp) -> EdgeMultiset:
    """Cheapest edge set of size ``c - 1`` connecting the required components.

    Minimum spanning tree over the contracted components; the cost between
    two components is their closest vertex pair, ties broken by ascending
    (component id, vertex id).
    """
    comp, c = connected_components(problem.required)
    if c <= 1:
        return EdgeMultiset()
    groups: list[list[int]] = [[] for _ in range(c)]
    for x, i in comp.items():
        groups[i].append(x)
    arrs = [np.array(sorted(g), dtype=np.int64) for g in groups]
    cand = []
    for i in range(c):
        rows = problem.dist[arrs[i]]
        for j in range(i + 1, c):
            sub = rows[:, arrs[j]]
            flat = int(np.argmin(sub))
            a, b = divmod(flat, sub.shape[1])
            cand.append((int(sub[a, b]), i, j, int(arrs[i][a]), int(arrs[j][b])))
    cand.sort()
    parent = list(range(c))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for w, i, j, u, v in cand:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
            chosen.append((u, v))
            if len(chosen) == c - 1:
                break
    return problem.edges_from_pairs(chosen)


def balancing_matching(problem: MetricRpp) -> EdgeMultiset:
    """Minimum-weight perfect matching on the odd-degree vertices of ``R``."""
    odd, _ = imbalanced_vertices(problem.required)
    m = min_weight_perfect_matching(odd, problem.dist)
    return problem.edges_from_pairs(m.pairs)


def approx_32(problem: MetricRpp) -> EdgeMultiset:
    """Connect with ``T``, then match the odd vertices of ``R + T``."""
    T = connecting_set(problem)
    odd, _ = imbalanced_vertices(problem.required + T)
    m = min_weight_perfect_matching(odd, problem.dist)
    return T + problem.edges_from_pairs(m.pairs)


def lower_bound(problem: MetricRpp) -> int:
    """``w(R) + max{w(M), w(T), floor((w(M) + w(T)) / 2)}``; at most the optimum."""
    wr = problem.required.total_weight
    wm = balancing_matching(problem).total_weight
    wt = connecting_set(problem).total_weight
    return max(wr + wm, wr + wt, wr + (wm + wt) // 2)


def ee_to_tour(problem: MetricRpp, S: EdgeMultiset) -> ClosedWalk:
    """Euler tour of ``R + S``; weight is exactly ``w(R) + w(S)``."""
    report = verify_ee(problem, S)
    if not report:
        raise InvalidSolution(f"not an Eulerian extension: {report.reason}")
    return euler_tour(problem.required + S)


def tour_to_ee(problem: MetricRpp, walk: ClosedWalk) -> EdgeMultiset:
    """Deadheading edges of a tour: ``E(W)`` minus ``R``."""
    traversed = walk.edge_multiset()
    if not problem.required.issubset(traversed):
        missing = (problem.required - traversed).expand()[0]
        raise InvalidSolution(f"tour misses required edge {missing[:2]}")
    return traversed - problem.required
