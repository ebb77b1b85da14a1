import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import closed, instance, pairs_of, path_metric
from oracles import brute_ee
from rpp_psaks.exact import OracleRefused, default_budget, exact_small
from rpp_psaks.generators import clustered_instance, random_instance
from rpp_psaks.metric import MetricRpp
from rpp_psaks.solver import verify_ee


def test_single_edge():
    p = MetricRpp.from_matrix(path_metric(2), [(0, 1)])
    D = exact_small(p)
    assert pairs_of(D) == [(0, 1)] and D.total_weight == 1


def test_balanced_connected_needs_nothing():
    p = MetricRpp.from_matrix(path_metric(3), [(0, 1), (1, 2), (0, 2)])
    assert len(exact_small(p)) == 0


def test_triangle_chain_doubles_connections():
    req, extra = [], []
    for t in range(4):
        a, b, c = 3 * t, 3 * t + 1, 3 * t + 2
        req += [(a, b, 2), (b, c, 2), (a, c, 2)]
        if t < 3:
            extra.append((c, c + 1, 3))
    _, p = closed(instance(12, extra, req))
    D = exact_small(p)
    assert pairs_of(D) == [(2, 3), (2, 3), (5, 6), (5, 6), (8, 9), (8, 9)]
    assert len(D.vertices()) == 2 * p.c - 2 == 6


def test_refusals():
    big = MetricRpp.from_matrix(path_metric(14), [(i, i + 1) for i in range(13)])
    with pytest.raises(OracleRefused, match="candidate vertices"):
        exact_small(big)
    p = MetricRpp.from_matrix(path_metric(4), [(0, 1), (2, 3)])
    with pytest.raises(OracleRefused, match="budget"):
        exact_small(p, edge_budget=40)
    with pytest.raises(OracleRefused, match="no Eulerian extension"):
        exact_small(p, edge_budget=1)


@given(st.integers(0, 100_000))
def test_matches_literal_enumeration(seed):
    rng = random.Random(seed)
    gen = clustered_instance if seed % 2 else random_instance
    inst = gen(rng, max_vertices=5, max_required=5)
    _, p = closed(inst)
    budget = default_budget(p)
    if budget > 4:
        return
    D = exact_small(p)
    w, k, combo = brute_ee(p.dist, [(u, v) for u, v, _ in p.required.expand()], budget)
    assert (D.total_weight, len(D)) == (w, k)
    assert verify_ee(p, D)
    unbounded = exact_small(p, edge_budget=math.inf)
    assert (unbounded.total_weight, len(unbounded)) == (w, k)
