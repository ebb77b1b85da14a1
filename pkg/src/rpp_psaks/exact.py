"""Exact Eulerian extensions for desk-scale instances.

Used as an oracle in tests.  The search never relies on structural
properties of optimal solutions: it explores every edge multiset over the
candidate vertices, collapsed to states

    (parity of each vertex, partition of the components, touched extras)

with Dijkstra ordered by ``(weight, edge count)``.  Two multisets reaching the
same state are interchangeable for every completion, so the first goal
state popped is a lexicographic ``(weight, count)`` minimiser.
"""
from __future__ import annotations

import heapq
import itertools
import math

from .graph import EdgeMultiset, connected_components, imbalanced_vertices
from .metric import MetricRpp

MAX_VERTICES = 12
MAX_BUDGET = 16


class OracleRefused(ValueError):
    """The instance is too large for exhaustive search."""


def default_budget(problem: MetricRpp) -> int:
    """``|M| + 2|T|`` for the instance."""
    _, b = imbalanced_vertices(problem.required)
    _, c = connected_components(problem.required)
    return b // 2 + 2 * max(c - 1, 0)


def _canon(labels) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def exact_small(problem: MetricRpp, edge_budget: float | None = None, vertices=None) -> EdgeMultiset:
    """Minimum-weight, then minimum-cardinality Eulerian extension.

    Only edges between ``vertices`` (default: vertices of required edges)
    are considered, and at most ``edge_budget`` of them (default
    ``|M| + 2|T|``; ``math.inf`` for no cap).  Refuses instances beyond
    ``MAX_VERTICES`` candidate vertices or a finite budget above
    ``MAX_BUDGET``.
    """
    R = problem.required
    if not R:
        return EdgeMultiset()
    vr = R.vertices()
    cand = sorted(vr if vertices is None else set(vertices) | vr)
    if len(cand) > MAX_VERTICES:
        raise OracleRefused(f"{len(cand)} candidate vertices exceed the limit of {MAX_VERTICES}")
    if edge_budget is None:
        edge_budget = default_budget(problem)
    bounded = edge_budget != math.inf
    if bounded and edge_budget > MAX_BUDGET:
        raise OracleRefused(f"edge budget {edge_budget} exceeds the limit of {MAX_BUDGET}")

    comp, c = connected_components(R)
    odd, _ = imbalanced_vertices(R)
    pos = {x: i for i, x in enumerate(cand)}
    target = sum(1 << pos[x] for x in odd)
    extras = [x for x in cand if x not in vr]
    unit = {x: comp[x] for x in vr}
    unit.update({x: c + i for i, x in enumerate(extras)})
    extra_bit = {x: 1 << i for i, x in enumerate(extras)}

    moves = []
    for u, v in itertools.combinations(cand, 2):
        moves.append((problem.w(u, v), u, v, (1 << pos[u]) | (1 << pos[v]),
                      unit[u], unit[v], extra_bit.get(u, 0) | extra_bit.get(v, 0)))

    def is_goal(parity, part, touched):
        if parity != target:
            return False
        if any(part[i] != part[0] for i in range(1, c)):
            return False
        return all(part[c + i] == part[0] for i, x in enumerate(extras) if touched & extra_bit[x])

    start_part = tuple(range(c + len(extras)))
    start = (0, start_part, 0, 0 if bounded else None)
    best = {start: (0, 0)}
    parent: dict = {start: None}
    tick = itertools.count()
    heap = [(0, 0, next(tick), start)]
    while heap:
        w, k, _, state = heapq.heappop(heap)
        if best.get(state) != (w, k):
            continue
        parity, part, touched, _cnt = state
        if is_goal(parity, part, touched):
            edges = []
            while parent[state] is not None:
                state, e = parent[state]
                edges.append(e)
            return problem.edges_from_pairs(edges)
        if bounded and k >= edge_budget:
            continue
        for mw, u, v, flip, uu, uv, tb in moves:
            lu, lv = part[uu], part[uv]
            if lu != lv:
                npart = _canon(lv if x == lu else x for x in part)
            else:
                npart = part
            nstate = (parity ^ flip, npart, touched | tb, k + 1 if bounded else None)
            cost = (w + mw, k + 1)
            old = best.get(nstate)
            if old is None or cost < old:
                best[nstate] = cost
                parent[nstate] = (state, (u, v))
                heapq.heappush(heap, (cost[0], cost[1], next(tick), nstate))
    raise OracleRefused(f"no Eulerian extension within {edge_budget} edges")


def optimum_weight(problem: MetricRpp, **kw) -> int:
    """Weight of an optimal tour of the metric instance."""
    return problem.required.total_weight + exact_small(problem, **kw).total_weight

