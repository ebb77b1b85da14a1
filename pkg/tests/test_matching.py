import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_mwpm
from rpp_psaks.matching import MatchingError, greedy_matching, min_weight_perfect_matching


@given(st.integers(0, 100_000), st.integers(0, 5))
def test_mwpm_matches_enumeration(seed, half):
    rng = random.Random(seed)
    k = 2 * half
    pts = rng.sample(range(20), k)
    cost = [[0] * 20 for _ in range(20)]
    for i in pts:
        for j in pts:
            if i < j:
                cost[i][j] = cost[j][i] = rng.randint(0, 15)
    m = min_weight_perfect_matching(pts, cost)
    assert m.total_weight == brute_mwpm(pts, cost)
    assert m.vertices() == frozenset(pts)
    assert sum(cost[u][v] for u, v in m.pairs) == m.total_weight


def test_mwpm_trivial_cases():
    assert min_weight_perfect_matching([], np.zeros((0, 0))).total_weight == 0
    m = min_weight_perfect_matching([3, 1], lambda u, v: 7)
    assert m.pairs == ((1, 3),) and m.total_weight == 7
    with pytest.raises(MatchingError):
        min_weight_perfect_matching([0, 1, 2], lambda u, v: 1)


def test_greedy_pairs_consecutive_ids():
    m = greedy_matching([5, 1, 3, 2], lambda u, v: abs(u - v))
    assert m.pairs == ((1, 2), (3, 5))
    assert m.total_weight == 3
