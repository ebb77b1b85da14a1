import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import closed, instance
from rpp_psaks.exact import exact_small
from rpp_psaks.generators import clustered_instance, random_instance
from rpp_psaks.graph import ClosedWalk, EdgeMultiset
from rpp_psaks.io import check_tour
from rpp_psaks.kernelizer import kernelize_metric
from rpp_psaks.lifting import easy_dispatch, expand_tour, lift_solution
from rpp_psaks.solver import InvalidSolution, approx_32, ee_to_tour
from rpp_psaks.trace import dumps, loads


def _optimum(inst):
    _, p = closed(inst)
    return inst.required.total_weight + exact_small(p).total_weight if inst.required else 0


def test_balanced_cycle_lifts_to_itself():
    inst = instance(4, [(0, 2, 9)], [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
    m, p = closed(inst)
    kernel, trace = kernelize_metric(p, 1)
    tour = lift_solution(inst, trace, EdgeMultiset(), kernel=kernel, metric=m)
    assert tour.edge_multiset() == inst.required
    assert tour.weight == 4


def test_expand_tour_follows_shortest_paths():
    inst = instance(5, [(1, 2, 1), (2, 3, 1)], [(0, 1, 2), (3, 4, 2)])
    m, p = closed(inst)
    S = p.edges_from_pairs([(m.index[1], m.index[3]), (m.index[0], m.index[4])])
    walk = expand_tour(m, S)
    assert walk.weight == 4 + 2 + 6
    assert check_tour(inst, walk) is None
    assert walk.edge_multiset().multiplicity((1, 2, 1)) == 2


@pytest.mark.parametrize("weight_reduce", [False, True])
def test_lift_through_serialized_trace(weight_reduce):
    rng = random.Random(5)
    for _ in range(30):
        inst = clustered_instance(rng)
        m, p = closed(inst)
        kernel, trace = kernelize_metric(p, Fraction(1, 2), weight_reduce=weight_reduce)
        again = loads(dumps(trace))
        for sol in (approx_32(kernel), ee_to_tour(kernel, approx_32(kernel))):
            tour = lift_solution(inst, again, sol)
            assert check_tour(inst, tour) is None


def test_lift_rejects_bad_solutions():
    inst = instance(4, [(1, 2, 5)], [(0, 1, 1), (2, 3, 1)])
    m, p = closed(inst)
    kernel, trace = kernelize_metric(p, 1)
    with pytest.raises(InvalidSolution, match="kernel solution rejected"):
        lift_solution(inst, trace, EdgeMultiset(), kernel=kernel, metric=m)
    with pytest.raises(InvalidSolution, match="outside the kernel"):
        lift_solution(inst, trace, ClosedWalk((0, 9, 0), ((0, 9, 1), (9, 0, 1))), kernel=kernel, metric=m)
    other = instance(4, [(1, 2, 5)], [(0, 1, 1), (1, 3, 1)])
    with pytest.raises(InvalidSolution, match="trace does not match"):
        lift_solution(other, trace, EdgeMultiset())


@settings(max_examples=40)
@given(st.integers(0, 100_000), st.sampled_from([Fraction(1, 10), Fraction(1, 2), Fraction(2)]), st.booleans())
def test_lifted_exact_kernel_solution_is_near_optimal(seed, eps, weight_reduce):
    rng = random.Random(seed)
    inst = (clustered_instance if seed % 2 else random_instance)(rng, max_vertices=6, max_required=7)
    m, p = closed(inst)
    kernel, trace = kernelize_metric(p, eps, weight_reduce=weight_reduce)
    tour = lift_solution(inst, trace, exact_small(kernel), kernel=kernel, metric=m)
    assert check_tour(inst, tour) is None
    opt = _optimum(inst)
    assert opt <= tour.weight <= (1 + eps) * opt


def test_dispatch_cheap_connection():
    inst = instance(4, [(1, 2, 1)], [(0, 1, 10), (2, 3, 10)])
    m, _ = closed(inst)
    d = easy_dispatch(m, Fraction(1, 10))
    assert d.case == "i" and d.kernel is None
    assert check_tour(inst, d.tour) is None
    assert d.tour.weight == 42 == _optimum(inst)


def test_dispatch_cheap_matching():
    tri = [(0, 1, 5), (1, 2, 5), (0, 2, 5), (2, 3, 1)]
    req = tri + [(u + 4, v + 4, w) for u, v, w in tri]
    inst = instance(8, [(3, 4, 20)], req)
    m, p = closed(inst)
    d = easy_dispatch(m, Fraction(1, 10))
    assert d.case == "ii"
    assert [len(s.edges) for s in d.trace.steps[:1]] == [2]
    assert d.kernel.b == 0
    tour = lift_solution(inst, d.trace, approx_32(d.kernel), kernel=d.kernel, metric=m)
    assert check_tour(inst, tour) is None
    assert tour.weight == 32 + 2 + 40 == _optimum(inst)


def test_dispatch_lossless_fallback():
    inst = instance(4, [(1, 2, 2)], [(0, 1, 1), (2, 3, 1)])
    m, p = closed(inst)
    d = easy_dispatch(m, Fraction(1, 10))
    assert d.case == "iii"
    assert d.kernel.n == p.n and d.kernel.required == p.required
    tour = lift_solution(inst, d.trace, exact_small(d.kernel), kernel=d.kernel, metric=m)
    assert tour.weight == _optimum(inst) == 8
