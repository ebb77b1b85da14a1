from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import instance, closed
from rpp_psaks.weightred import WeightReductionError, psaks_weight_params, reduce_weights

weights_st = st.lists(st.integers(0, 10**6), min_size=1, max_size=40)
eps_st = st.fractions(min_value=Fraction(1, 100), max_value=Fraction(5), max_denominator=100)


def test_hand_evaluated_example():
    r = reduce_weights([3, 5], beta=5, N=4, eps=1)
    assert r.q == Fraction(5, 4)
    assert r.reduced == (2, 4)
    assert max(r.reduced) <= r.bound() == 4


def test_zero_weights_and_zero_beta():
    assert reduce_weights([0, 0, 0], beta=7, N=3, eps=Fraction(1, 2)).reduced == (0, 0, 0)
    r = reduce_weights([0, 0], beta=0, N=2, eps=1)
    assert r.reduced == (0, 0) and r.q == 1


def test_huge_eps_collapses_everything():
    r = reduce_weights([1, 4, 9], beta=9, N=1, eps=100)
    assert r.reduced == (0, 0, 0)


def test_errors():
    with pytest.raises(WeightReductionError):
        reduce_weights([6], beta=5, N=1, eps=1)
    with pytest.raises(WeightReductionError):
        reduce_weights([1], beta=5, N=0, eps=1)
    with pytest.raises(WeightReductionError):
        reduce_weights([1], beta=5, N=1, eps=0)


@given(weights_st, st.integers(1, 500), eps_st)
def test_bound_sandwich_and_monotonicity(ws, N, eps):
    beta = max(ws)
    r = reduce_weights(ws, beta, N, eps)
    assert all(x <= Fraction(N) / eps for x in r.reduced)
    for w, x in zip(ws, r.reduced):
        assert r.q * x <= w <= r.q * (x + 1)
    order = sorted(range(len(ws)), key=lambda i: ws[i])
    for a, b in zip(order, order[1:]):
        assert r.reduced[a] <= r.reduced[b]


def test_psaks_params_direct_formula():
    # two required paths of weight 5 each, 3 apart: w(R)=10, w(T)=3, |R|=6, b=4, c=2
    req = [(0, 1, 1), (1, 2, 2), (2, 3, 2), (4, 5, 1), (5, 6, 2), (6, 7, 2)]
    _, p = closed(instance(8, [(3, 4, 3)], req))
    assert (p.required.total_weight, len(p.required), p.b, p.c) == (10, 6, 4, 2)
    assert psaks_weight_params(p) == (13, 10)


def test_psaks_params_single_component_cases():
    from rpp_psaks.graph import EdgeMultiset
    from rpp_psaks.metric import MetricRpp

    loop = MetricRpp(MetricRpp.from_matrix([[0]], []).dist, EdgeMultiset([(0, 0, 4)]), (0,))
    assert psaks_weight_params(loop) == (4, 1)
    two = MetricRpp.from_matrix([[0, 3], [3, 0]], [(0, 1), (0, 1)])
    assert psaks_weight_params(two) == (6, 2)
