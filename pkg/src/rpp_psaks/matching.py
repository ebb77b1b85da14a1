"""Perfect matchings on vertex sets with symmetric integer costs."""
from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import numpy as np


class MatchingError(ValueError):
    pass


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    total_weight: int

    def __len__(self) -> int:
        return len(self.pairs)

    def vertices(self) -> frozenset[int]:
        return frozenset(x for p in self.pairs for x in p)


def _as_cost(cost) -> Callable[[int, int], int]:
    if callable(cost):
        return cost
    arr = np.asarray(cost)
    return lambda u, v: int(arr[u, v])


def _prepare(vertices: Iterable[int]) -> list[int]:
    vs = sorted(set(vertices))
    if len(vs) % 2:
        raise MatchingError(f"perfect matching needs an even vertex count, got {len(vs)}")
    return vs


def min_weight_perfect_matching(vertices: Iterable[int], cost) -> Matching:
    """Exact minimum-weight perfect matching (blossom algorithm).

    ``cost`` is a callable ``cost(u, v)`` or a matrix indexed by vertex id.
    Costs are non-negative integers; the search maximises ``K - cost`` with
    maximum cardinality, which is exact for integers.
    """
    vs = _prepare(vertices)
    if not vs:
        return Matching((), 0)
    f = _as_cost(cost)
    if len(vs) == 2:
        return Matching(((vs[0], vs[1]),), int(f(vs[0], vs[1])))
    pair_cost = {(u, v): int(f(u, v)) for u, v in combinations(vs, 2)}
    big = max(pair_cost.values()) + 1
    g = nx.Graph()
    g.add_nodes_from(vs)
    g.add_weighted_edges_from((u, v, big - c) for (u, v), c in pair_cost.items())
    mate = nx.max_weight_matching(g, maxcardinality=True)
    pairs = tuple(sorted((min(u, v), max(u, v)) for u, v in mate))
    if 2 * len(pairs) != len(vs):
        raise MatchingError("no perfect matching found")
    return Matching(pairs, sum(pair_cost[p] for p in pairs))


def greedy_matching(vertices: Iterable[int], cost=None) -> Matching:
    """Pair consecutive vertices in ascending id order."""
    vs = _prepare(vertices)
    pairs = tuple((vs[i], vs[i + 1]) for i in range(0, len(vs), 2))
    f = _as_cost(cost) if cost is not None else (lambda u, v: 0)
    return Matching(pairs, sum(int(f(u, v)) for u, v in pairs))
