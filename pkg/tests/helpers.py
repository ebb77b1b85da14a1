"""Small instance builders shared by tests."""
from rpp_psaks.graph import EdgeMultiset, RppInstance, WeightedMultigraph
from rpp_psaks.metric import metric_close


def instance(n, graph_edges, required):
    """``graph_edges`` as (u, v, w); required as (u, v, w) copies also added to the graph."""
    edges = [(u, v, w, 1) for u, v, w in graph_edges]
    R = EdgeMultiset(required)
    edges += [(u, v, w, m) for (u, v, w), m in R.items()]
    return RppInstance(WeightedMultigraph(n, tuple(edges)), R)


def closed(inst, all_vertices=False):
    m = metric_close(inst, terminals=range(inst.n) if all_vertices else None)
    return m, m.problem()


def path_metric(n, step=1):
    return [[abs(i - j) * step for j in range(n)] for i in range(n)]


def cycle_metric(n):
    return [[min(abs(i - j), n - abs(i - j)) for j in range(n)] for i in range(n)]


def pairs_of(S):
    return sorted((u, v) for u, v, _ in S.expand())
