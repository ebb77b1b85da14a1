import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import floyd_warshall
from rpp_psaks import _kernels
from rpp_psaks._dijkstra_py import sssp_many as py_sssp
from rpp_psaks.generators import random_instance
from rpp_psaks.graph import ClosedWalk, EdgeMultiset, RppInstance, WeightedMultigraph
from rpp_psaks.metric import MetricError, MetricRpp, _csr, check_metric, expand_walk, metric_close


def _instance(n, edges, req):
    return RppInstance(WeightedMultigraph(n, tuple(edges)), EdgeMultiset(req))


@given(st.integers(0, 100_000))
def test_closure_matches_floyd_warshall(seed):
    inst = random_instance(random.Random(seed), max_vertices=8)
    m = metric_close(inst, terminals=range(inst.n))
    ref = floyd_warshall(inst.n, inst.graph.edges)
    assert np.array_equal(m.dist, ref.astype(np.int64))
    check_metric(m.dist)


@given(st.integers(0, 100_000))
def test_paths_realise_distances(seed):
    inst = random_instance(random.Random(seed), max_vertices=8)
    m = metric_close(inst, terminals=range(inst.n))
    for u in range(inst.n):
        for v in range(inst.n):
            p = m.path(u, v)
            assert p[0] == u and p[-1] == v
            assert sum(m.original_weight(a, b) for a, b in zip(p, p[1:])) == m.distance(u, v)
            assert len(set(p)) == len(p)


@pytest.mark.skipif(_kernels.BACKEND != "compiled", reason="compiled extension not built")
@given(st.integers(0, 100_000))
def test_compiled_and_python_backends_agree(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, max_vertices=9)
    # zero-weight edges stress the predecessor tie-break
    edges = [(u, v, w if rng.random() < 0.7 else 0, m) for u, v, w, m in inst.graph.edges]
    g = WeightedMultigraph(inst.n, tuple(edges))
    indptr, idx, wts, _ = _csr(g)
    src = np.arange(inst.n, dtype=np.int64)
    d1, p1 = _kernels.sssp_many(indptr, idx, wts, src)
    d2, p2 = py_sssp(indptr, idx, wts, src)
    assert np.array_equal(d1, d2)
    assert np.array_equal(p1, p2)


def test_unreachable_terminals_are_named():
    inst = _instance(4, [(0, 1, 1, 1), (2, 3, 1, 1)], [(0, 1, 1), (2, 3, 1)])
    with pytest.raises(MetricError, match="0 and 2"):
        metric_close(inst)


def test_parallel_edges_use_cheapest_copy():
    inst = _instance(2, [(0, 1, 9, 1), (0, 1, 4, 1)], [(0, 1, 9)])
    m = metric_close(inst)
    assert m.distance(0, 1) == 4
    assert m.required_offset == 5
    assert m.problem().required.total_weight == 4


def test_expand_walk_preserves_metric_weight():
    inst = _instance(4, [(0, 1, 1, 1), (1, 2, 1, 1), (2, 3, 1, 1), (0, 3, 10, 1)], [(0, 1, 1), (2, 3, 1)])
    m = metric_close(inst)
    walk = expand_walk(m, [0, 3, 0])
    assert walk.vertices == (0, 1, 2, 3, 2, 1, 0)
    assert walk.weight == 6


def test_metric_rpp_validation():
    with pytest.raises(MetricError, match="triangle"):
        MetricRpp.from_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]], [(0, 1)])
    with pytest.raises(MetricError):
        MetricRpp.from_matrix([[0, 1], [2, 0]], [(0, 1)])
    p = MetricRpp.from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]], [(0, 2)], labels=(7, 8, 9))
    sub = p.restrict([0, 2])
    assert sub.labels == (7, 9) and sub.required == EdgeMultiset([(0, 1, 2)])
    with pytest.raises(MetricError):
        p.restrict([0, 1])


def test_empty_terminal_set():
    inst = _instance(3, [(0, 1, 1, 1)], [])
    m = metric_close(inst)
    assert m.dist.shape == (0, 0)
    assert expand_walk(m, []) == ClosedWalk((), ())


def test_environment_forces_pure_python_backend():
    code = "import rpp_psaks; print(rpp_psaks.BACKEND)"
    env = dict(os.environ, RPP_PSAKS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
