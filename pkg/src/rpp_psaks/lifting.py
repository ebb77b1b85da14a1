"""Turning kernel solutions into tours of the original graph."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import ClosedWalk, EdgeMultiset, RppInstance, euler_tour
from .kernelizer import (
    KernelError,
    as_fraction,
    kernelize_metric,
    replay,
    rule_add_matching,
    rule_delete_nonrequired,
    rule_strip_cycles,
)
from .metric import MetricInstance, MetricRpp, metric_close
from .solver import (
    InvalidSolution,
    balancing_matching,
    connecting_set,
    tour_to_ee,
    verify_ee,
)
from .trace import KernelTrace


def expand_tour(metric: MetricInstance, S: EdgeMultiset) -> ClosedWalk:
    """Euler tour of the original required edges plus ``S`` expanded to shortest paths.

    ``S`` is over closure ids.  The tour weight is ``w(R) + w(S)`` with ``R``
    at its original weights.
    """
    inst = metric.source
    edges = dict(inst.required.items())
    term = metric.terminals
    for (u, v, _), m in S.items():
        a, b = term[u], term[v]
        if a == b:
            continue
        path = metric.path(a, b)
        for x, y in zip(path, path[1:]):
            e = (min(x, y), max(x, y), metric.original_weight(x, y))
            edges[e] = edges.get(e, 0) + m
    return euler_tour(EdgeMultiset(edges))


def lift_solution(
    original: RppInstance,
    trace: KernelTrace,
    kernel_solution: EdgeMultiset | ClosedWalk,
    *,
    kernel: MetricRpp | None = None,
    metric: MetricInstance | None = None,
) -> ClosedWalk:
    """Tour of ``original`` from an Eulerian extension or tour of the kernel.

    The kernel solution uses kernel ids ``0..k-1`` (``kernel.labels[i]`` is
    the original vertex behind id ``i``).  The kernel is rebuilt by replaying ``trace`` unless given.  Raises
    InvalidSolution if the kernel solution is not valid for the kernel.
    """
    if metric is None:
        metric = metric_close(original, terminals=trace.terminals)
    problem = metric.problem()
    if kernel is None:
        try:
            kernel = replay(trace, problem)
        except KernelError as exc:
            raise InvalidSolution(f"trace does not match the instance: {exc}") from None
    if isinstance(kernel_solution, ClosedWalk):
        walk = kernel_solution
        if any(not 0 <= x < kernel.n for x in walk.vertices):
            raise InvalidSolution("kernel tour visits a vertex outside the kernel")
        walk = ClosedWalk(walk.vertices, tuple(
            (u, v, w) if u == v else (u, v, kernel.w(u, v)) for u, v, w in walk.edges))
        S = tour_to_ee(kernel, walk)
    else:
        S = kernel_solution
    report = verify_ee(kernel, S)
    if not report:
        raise InvalidSolution(f"kernel solution rejected: {report.reason}")
    if not problem.required:
        return ClosedWalk((), ())
    idx = metric.index
    pairs = [(idx[kernel.labels[u]], idx[kernel.labels[v]]) for u, v, _ in S.expand()]
    pairs += [(idx[u], idx[v]) for u, v, _ in trace.added_matching()]
    lifted = problem.edges_from_pairs(pairs)
    check = verify_ee(problem, lifted)
    if not check:
        raise InvalidSolution(f"lifted extension invalid on the input: {check.reason}")
    return expand_tour(metric, lifted)


# --------------------------------------------------------------------------
# easy cases


@dataclass(frozen=True)
class Dispatch:
    """Outcome of :func:`easy_dispatch`.

    ``case`` is ``"i"`` (tour returned directly), ``"ii"`` (matching added,
    then kernelized) or ``"iii"`` (only lossless rules applied).
    """

    case: str
    tour: ClosedWalk | None = None
    kernel: MetricRpp | None = None
    trace: KernelTrace | None = None


def easy_dispatch(metric: MetricInstance, eps) -> Dispatch:
    """Handle the instances with a cheap connecting set or cheap matching.

    (i)   ``w(T) <= eps (w(R) + w(M))``: the tour of ``R + T + T + M``.
    (ii)  ``w(M) <= eps (w(R) + w(T))``: add all of ``M`` to ``R`` and kernelize.
    (iii) otherwise strip cycles and drop non-required vertices (lossless).
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise KernelError(f"eps must be positive, got {eps}")
    problem = metric.problem()
    wr = problem.required.total_weight
    T = connecting_set(problem)
    M = balancing_matching(problem)
    wt, wm = T.total_weight, M.total_weight
    if wt <= eps * (wr + wm):
        S = T + T + M
        return Dispatch("i", tour=expand_tour(metric, S))
    if wm <= eps * (wr + wt):
        grown, step = rule_add_matching(problem, wm)
        kernel, trace = kernelize_metric(grown, eps)
        trace.steps.insert(0, step)
        trace.terminals = tuple(problem.labels)
        return Dispatch("ii", kernel=kernel, trace=trace)
    eps0 = Fraction(eps)
    trace = KernelTrace(eps0, Fraction(0), Fraction(0), Fraction(0), tuple(problem.labels))
    cur, strips = rule_strip_cycles(problem)
    trace.steps.extend(strips)
    cur, deleted = rule_delete_nonrequired(cur, validate=False)
    trace.steps.append(deleted)
    trace.kernel_labels = tuple(cur.labels)
    return Dispatch("iii", kernel=cur, trace=trace)

