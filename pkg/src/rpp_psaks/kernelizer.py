"""Reduction rules and the approximate kernelization pipeline.

All rules act on a :class:`MetricRpp`.  Trace steps name vertices and edges
by ``problem.labels`` (the original vertex ids), so steps from different
stages compose without tracking intermediate relabellings.

Pipeline (``kernelize``)::

    metric closure -> extract balanced vertices (threshold gamma)
                   -> strip cycles -> drop vertices outside V(R)
                   -> optional weight reduction
"""
from __future__ import annotations

from collections import Counter, defaultdict
from fractions import Fraction

import numpy as np

from .graph import (
    Edge,
    EdgeMultiset,
    RppInstance,
    biconnected_blocks,
    connected_components,
    imbalanced_vertices,
)
from .metric import MetricError, MetricInstance, MetricRpp, check_metric, metric_close
from .trace import (
    AddedMatching,
    DeletedVertices,
    Extraction,
    KernelTrace,
    StrippedCycle,
    WeightQuantum,
)
from .weightred import psaks_weight_params, quantum, reduce_matrix


class KernelError(ValueError):
    pass


class ExtractionError(KernelError):
    pass


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float (via its repr)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x))


def _labelled(problem: MetricRpp, edges) -> tuple[Edge, ...]:
    lab = problem.labels
    out = []
    for u, v, w in edges:
        a, b = lab[u], lab[v]
        out.append((a, b, w) if a <= b else (b, a, w))
    return tuple(out)


# --------------------------------------------------------------------------
# Rule 1


def rule_delete_nonrequired(problem: MetricRpp, validate: bool = True) -> tuple[MetricRpp, DeletedVertices]:
    """Keep exactly the vertices incident to required edges."""
    if validate:
        check_metric(problem.dist)
    vr = problem.required.vertices()
    keep = sorted(vr)
    gone = tuple(problem.labels[x] for x in range(problem.n) if x not in vr)
    return problem.restrict(keep), DeletedVertices(gone)


# --------------------------------------------------------------------------
# Rule 2


def _dfs_tree(vertices, nbrs) -> set[tuple[int, int]]:
    """Pairs (u, v), u < v, of an iterative DFS spanning forest (ascending ids)."""
    seen = set()
    tree = set()
    for root in vertices:
        if root in seen:
            continue
        seen.add(root)
        stack = [(root, iter(nbrs[root]))]
        while stack:
            u, it = stack[-1]
            for w in it:
                if w not in seen:
                    seen.add(w)
                    tree.add((u, w) if u < w else (w, u))
                    stack.append((w, iter(nbrs[w])))
                    break
            else:
                stack.pop()
    return tree


def _strip(edges: list[Edge]) -> tuple[list[list[int]], list[int]]:
    """Delete cycles from an edge list by walking depth-first.

    Walks along unused edges keeping the current path on a stack.  Reaching
    a vertex already on the path closes a cycle, whose edges are deleted and
    popped.  A vertex without unused edges is popped and its entry edge kept.
    Returns (cycles as edge-index lists, kept edge indices); the kept edges
    form a forest.
    """
    inc: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for i, (u, v, _) in enumerate(edges):
        inc[u].append((v, i))
        if u != v:
            inc[v].append((u, i))
    for lst in inc.values():
        lst.sort()
    ptr = dict.fromkeys(inc, 0)
    used = [False] * len(edges)
    cycles: list[list[int]] = []
    kept: list[int] = []
    for start in sorted(inc):
        stack = [(start, -1)]
        pos = {start: 0}
        while stack:
            u = stack[-1][0]
            lst = inc[u]
            p = ptr[u]
            while p < len(lst) and used[lst[p][1]]:
                p += 1
            ptr[u] = p
            if p == len(lst):
                x, e = stack.pop()
                del pos[x]
                if e >= 0:
                    kept.append(e)
                continue
            w, i = lst[p]
            used[i] = True
            if w in pos:
                k = pos[w]
                cyc = [e for _, e in stack[k + 1:]] + [i]
                for x, _ in stack[k + 1:]:
                    del pos[x]
                del stack[k + 1:]
                cycles.append(cyc)
            else:
                pos[w] = len(stack)
                stack.append((w, i))
    return cycles, kept


def rule_strip_cycles(problem: MetricRpp) -> tuple[MetricRpp, list[StrippedCycle]]:
    """Per component keep a DFS spanning tree and delete the cycles of the rest.

    Afterwards a component on ``k`` vertices has at most ``max(1, 2k - 2)``
    required edges; components, parities and Eulerian extensions are
    unchanged.  A one-vertex component keeps exactly one loop.
    """
    R = problem.required
    if not R:
        return problem, []
    nbrs: dict[int, set[int]] = defaultdict(set)
    for u, v, _ in R.keys():
        nbrs[u].add(v)
        nbrs[v].add(u)
    order = sorted(nbrs)
    tree = _dfs_tree(order, {x: sorted(y for y in nbrs[x] if y != x) for x in order})

    rest: list[Edge] = []
    kept = Counter()
    for e in R.expand():
        u, v, _ = e
        if (u, v) in tree:
            tree.discard((u, v))
            kept[e] += 1
        else:
            rest.append(e)

    # a vertex carrying only loops has an empty tree; it keeps one loop
    loop_only = {x for x in order if nbrs[x] == {x}}
    spare = []
    for e in rest:
        if e[0] == e[1] and e[0] in loop_only:
            loop_only.discard(e[0])
            kept[e] += 1
        else:
            spare.append(e)

    cycles, left = _strip(spare)
    for i in left:
        kept[spare[i]] += 1
    steps = [StrippedCycle(_labelled(problem, [spare[i] for i in cyc])) for cyc in cycles]
    return problem.with_required(EdgeMultiset(kept)), steps


# --------------------------------------------------------------------------
# vertex extraction


class _Required:
    """Mutable adjacency view of a required multiset used during Rule 3."""

    def __init__(self, problem: MetricRpp):
        self.problem = problem
        self.dist = problem.dist
        self.adj: dict[int, Counter] = defaultdict(Counter)
        for (u, v, _), m in problem.required.items():
            self.adj[u][v] += m
            if u != v:
                self.adj[v][u] += m

    def degree(self, v: int) -> int:
        nb = self.adj.get(v)
        if not nb:
            return 0
        return sum(nb.values()) + nb.get(v, 0)

    def edge(self, u: int, v: int) -> Edge:
        if u > v:
            u, v = v, u
        if u == v:
            return (u, u, self._loop_weight(u))
        return (u, v, int(self.dist[u, v]))

    def _loop_weight(self, u: int) -> int:
        for (a, b, w) in self.problem.required.keys():
            if a == b == u:
                return w
        return 0

    def remove(self, u: int, v: int, k: int = 1) -> None:
        nb = self.adj[u]
        if nb[v] < k:
            raise ExtractionError(f"edge ({u}, {v}) is not required {k} times")
        nb[v] -= k
        if not nb[v]:
            del nb[v]
        if u != v:
            nb = self.adj[v]
            nb[u] -= k
            if not nb[u]:
                del nb[u]
        for x in (u, v):
            if not self.adj[x]:
                del self.adj[x]

    def add(self, u: int, v: int, k: int = 1) -> None:
        self.adj[u][v] += k
        if u != v:
            self.adj[v][u] += k

    def component(self, v: int) -> set[int]:
        seen = {v}
        todo = [v]
        while todo:
            x = todo.pop()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    def blocks(self, comp: set[int]) -> tuple[list[set[int]], dict[int, list[int]]]:
        """Vertex sets of the blocks of ``comp`` and the block ids per vertex."""
        simple = {x: sorted(y for y in self.adj[x] if y != x) for x in comp}
        raw = biconnected_blocks(simple)
        sets = [set(x for e in blk for x in e) for blk in raw]
        of: dict[int, list[int]] = defaultdict(list)
        for i, s in enumerate(sets):
            for x in s:
                of[x].append(i)
        return sets, of

    def multiset(self) -> EdgeMultiset:
        out = {}
        for u, nb in self.adj.items():
            for v, m in nb.items():
                if u <= v:
                    out[self.edge(u, v)] = m
        return EdgeMultiset(out)


def _extract(state: _Required, v: int, comp: set[int], blocks, block_of) -> Extraction:
    """Extract ``v`` in place; preconditions are the caller's concern."""
    removed: list[Edge] = []
    added: list[Edge] = []
    mine = block_of.get(v, [])
    case = "a"
    if len(mine) == 2:
        ends = []
        for bi in mine:
            ends.append(min(y for y in state.adj[v] if y != v and y in blocks[bi]))
        a, b = ends
        for x in ends:
            removed.append(state.edge(x, v))
            state.remove(x, v)
        added.append(state.edge(a, b))
        state.add(a, b)
        case = "b1"
        if v in state.adj:
            case = "b2"
    if v in state.adj:
        nb = state.adj[v]
        odd = sorted(y for y, m in nb.items() if y != v and m % 2)
        for y, m in sorted(nb.items()):
            removed.extend([state.edge(v, y)] * m)
        for y, m in list(nb.items()):
            state.remove(v, y, m)
        for i in range(0, len(odd), 2):
            p, q = odd[i], odd[i + 1]
            added.append(state.edge(p, q))
            state.add(p, q)
    return Extraction(v, case, tuple(removed), tuple(added))


def extract_vertex(problem: MetricRpp, v: int) -> tuple[EdgeMultiset, Extraction]:
    """Extract vertex ``v`` from the required graph.

    The returned step is expressed in ``problem.labels``.  Raises
    ExtractionError naming the failed precondition.
    """
    if v not in problem.required.vertices():
        raise ExtractionError(f"vertex {v} is not incident to a required edge")
    state = _Required(problem)
    if state.degree(v) % 2:
        raise ExtractionError(f"vertex {v} is not balanced")
    comp = state.component(v)
    if len(comp) < 3:
        raise ExtractionError(f"component of vertex {v} has {len(comp)} < 3 vertices")
    blocks, block_of = state.blocks(comp)
    if len(block_of.get(v, [])) > 2:
        raise ExtractionError(f"vertex {v} is a cut vertex in {len(block_of[v])} blocks (at most 2 allowed)")
    step = _extract(state, v, comp, blocks, block_of)
    return state.multiset(), _relabel_step(problem, step)


def _relabel_step(problem: MetricRpp, step: Extraction) -> Extraction:
    return Extraction(problem.labels[step.vertex], step.case,
                      _labelled(problem, step.removed), _labelled(problem, step.added))


# --------------------------------------------------------------------------
# Rule 3


def _far(dist_row: np.ndarray, gamma: Fraction) -> np.ndarray:
    return dist_row * gamma.denominator > gamma.numerator


def ball_centres(problem: MetricRpp, gamma: Fraction | None) -> set[int]:
    """Greedy inclusion-maximal sets of pairwise distance > gamma, one per component.

    Vertices are considered in ascending id; ``gamma=None`` means infinity
    (one vertex per component).
    """
    comp, c = connected_components(problem.required)
    groups: list[list[int]] = [[] for _ in range(c)]
    for x in sorted(comp):
        groups[comp[x]].append(x)
    chosen: set[int] = set()
    for g in groups:
        picked: list[int] = []
        for x in g:
            if not picked:
                picked.append(x)
                continue
            if gamma is None:
                break
            if bool(np.all(_far(problem.dist[x, picked], gamma))):
                picked.append(x)
        chosen.update(picked)
    return chosen


def rule_extract_balanced(problem: MetricRpp, gamma, validate: bool = True) -> tuple[MetricRpp, list[Extraction]]:
    """Extract eligible balanced vertices outside the gamma-separated sets.

    A vertex is eligible if it is balanced, its component has at least three
    vertices and it lies in at most two blocks.  The lowest-id eligible vertex
    is extracted and the scan restarts until no eligible vertex is left.
    """
    if validate:
        check_metric(problem.dist)
    if gamma is not None:
        gamma = as_fraction(gamma)
        if gamma < 0:
            raise KernelError("gamma must be non-negative")
    R = problem.required
    if not R:
        return problem, []
    centres = ball_centres(problem, gamma)
    state = _Required(problem)
    comp_of, _ = connected_components(R)
    members: dict[int, set[int]] = defaultdict(set)
    for x, i in comp_of.items():
        members[i].add(x)
    info = {i: state.blocks(vs) for i, vs in members.items() if len(vs) >= 3}
    order = sorted(x for x in comp_of if x not in centres)
    alive = set(order)
    steps: list[Extraction] = []
    while True:
        pick = None
        for x in order:
            if x not in alive:
                continue
            i = comp_of[x]
            if len(members[i]) < 3 or state.degree(x) % 2:
                continue
            if len(info[i][1].get(x, ())) <= 2:
                pick = x
                break
        if pick is None:
            break
        i = comp_of[pick]
        blocks, block_of = info[i]
        steps.append(_extract(state, pick, members[i], blocks, block_of))
        alive.discard(pick)
        members[i].discard(pick)
        if len(members[i]) >= 3:
            info[i] = state.blocks(members[i])
        else:
            info.pop(i, None)
        order = [x for x in order if x in alive]
    return problem.with_required(state.multiset()), [_relabel_step(problem, s) for s in steps]


# --------------------------------------------------------------------------
# Rule 4


def rule_add_matching(problem: MetricRpp, delta: int) -> tuple[MetricRpp, AddedMatching]:
    """Add the cheapest edges of a minimum balancing matching while their total is <= delta."""
    from .solver import balancing_matching

    M = sorted(balancing_matching(problem).expand(), key=lambda e: (e[2], e[0], e[1]))
    picked = []
    total = 0
    for e in M:
        if total + e[2] > delta:
            break
        total += e[2]
        picked.append(e)
    S = EdgeMultiset(picked)
    return problem.with_required(problem.required + S), AddedMatching(_labelled(problem, picked))


# --------------------------------------------------------------------------
# pipeline


def choose_gamma(problem: MetricRpp, eps1: Fraction, bound: str = "r") -> Fraction | None:
    """``eps1 * L / (4c - 4)`` with ``L = w(R)`` (or the lower bound for ``bound='max'``).

    Returns None (infinity) when ``c <= 1``.
    """
    _, c = connected_components(problem.required)
    if c <= 1:
        return None
    wr = problem.required.total_weight
    if bound == "r":
        base = Fraction(wr)
    elif bound == "max":
        from .solver import balancing_matching, connecting_set

        wm = balancing_matching(problem).total_weight
        wt = connecting_set(problem).total_weight
        base = max(Fraction(wr + wm), Fraction(wr + wt), wr + Fraction(wm + wt, 2))
    else:
        raise KernelError(f"unknown gamma bound {bound!r}; use 'r' or 'max'")
    return eps1 * base / (4 * c - 4)


def split_eps(eps, weight_reduce: bool) -> tuple[Fraction, Fraction, Fraction]:
    eps = as_fraction(eps)
    if eps <= 0:
        raise KernelError(f"eps must be positive, got {eps}")
    if weight_reduce:
        return eps, eps / 2, eps / 2
    return eps, eps, Fraction(0)


def _upper(dist: np.ndarray) -> tuple[int, ...]:
    iu, ju = np.triu_indices(dist.shape[0], 1)
    return tuple(int(x) for x in dist[iu, ju])


def reduce_kernel_weights(kernel: MetricRpp, eps2: Fraction) -> tuple[MetricRpp, WeightQuantum]:
    """Floor all kernel weights to multiples of ``eps2 * beta / N``."""
    beta, N = psaks_weight_params(kernel)
    q = quantum(beta, N, eps2)
    return _apply_quantum(kernel, q), WeightQuantum(q, beta, N, _upper(kernel.dist))


def _apply_quantum(kernel: MetricRpp, q: Fraction) -> MetricRpp:
    red = reduce_matrix(kernel.dist, q)
    req = EdgeMultiset(
        {(u, v, (w * q.denominator) // q.numerator if u == v else int(red[u, v])): m
         for (u, v, w), m in kernel.required.items()}
    )
    return MetricRpp(red, req, kernel.labels)


def kernelize_metric(
    problem: MetricRpp,
    eps,
    *,
    weight_reduce: bool = False,
    gamma_bound: str = "r",
    validate: bool = False,
) -> tuple[MetricRpp, KernelTrace]:
    """Kernelize a metric instance; ``problem.labels`` name the original vertices."""
    eps, eps1, eps2 = split_eps(eps, weight_reduce)
    gamma = choose_gamma(problem, eps1, gamma_bound) if problem.required else None
    trace = KernelTrace(eps, eps1, eps2, gamma, tuple(problem.labels), gamma_bound=gamma_bound)
    if validate:
        check_metric(problem.dist)
    if not problem.required:
        kernel = problem.restrict(())
        trace.steps.append(DeletedVertices(tuple(problem.labels)))
        return kernel, trace
    cur, ext = rule_extract_balanced(problem, gamma, validate=False)
    trace.steps.extend(ext)
    cur, strips = rule_strip_cycles(cur)
    trace.steps.extend(strips)
    cur, deleted = rule_delete_nonrequired(cur, validate=False)
    trace.steps.append(deleted)
    if weight_reduce:
        cur, wq = reduce_kernel_weights(cur, eps2)
        trace.steps.append(wq)
    trace.kernel_labels = tuple(cur.labels)
    return cur, trace


def kernelize(
    instance: RppInstance | MetricInstance,
    eps,
    *,
    weight_reduce: bool = False,
    gamma_bound: str = "r",
) -> tuple[MetricRpp, KernelTrace]:
    """Metric closure followed by :func:`kernelize_metric`.

    Accepts an instance or an already computed closure.  The kernel is a
    complete metric instance whose labels are original vertex ids.
    """
    metric = instance if isinstance(instance, MetricInstance) else metric_close(instance)
    return kernelize_metric(metric.problem(), eps, weight_reduce=weight_reduce, gamma_bound=gamma_bound)


def size_bounds(b: int, c: int, eps1) -> tuple[Fraction, Fraction]:
    """Upper bounds on kernel vertices and required edges."""
    eps1 = as_fraction(eps1)
    extra = Fraction(16 * (c - 1)) / eps1 if c > 1 else Fraction(0)
    return 2 * b + 2 * c + extra, 4 * b + 4 * c + 2 * extra


# --------------------------------------------------------------------------
# replay


def replay(trace: KernelTrace, problem: MetricRpp) -> MetricRpp:
    """Apply the recorded steps to ``problem`` and return the kernel.

    ``problem`` must be the metric instance the trace was recorded on (same
    labels).  Raises KernelError if a step does not apply.
    """
    if tuple(problem.labels) != tuple(trace.terminals):
        raise KernelError("trace terminals do not match the instance")
    pos = {x: i for i, x in enumerate(problem.labels)}
    R: Counter = Counter()
    for e, m in problem.required.items():
        R[_labelled(problem, [e])[0]] += m

    def take(edges, what):
        for e in edges:
            if R[e] <= 0:
                raise KernelError(f"{what}: edge {e} is not present")
            R[e] -= 1
            if not R[e]:
                del R[e]

    quantum_step = None
    for s in trace.steps:
        if isinstance(s, Extraction):
            take(s.removed, f"extraction of {s.vertex}")
            R.update(s.added)
        elif isinstance(s, StrippedCycle):
            take(s.edges, "cycle strip")
        elif isinstance(s, AddedMatching):
            R.update(s.edges)
        elif isinstance(s, WeightQuantum):
            quantum_step = s
    keep = []
    for x in trace.kernel_labels:
        if x not in pos:
            raise KernelError(f"kernel vertex {x} is not in the instance")
        keep.append(pos[x])
    touched = {x for e in R for x in e[:2]}
    if touched != set(trace.kernel_labels):
        raise KernelError("replayed required edges do not span the recorded kernel vertices")
    req = EdgeMultiset({(pos[u], pos[v], w): m for (u, v, w), m in R.items()})
    try:
        kernel = problem.with_required(req).restrict(keep)
    except MetricError as exc:
        raise KernelError(str(exc)) from None
    if quantum_step is not None:
        kernel = _apply_quantum(kernel, quantum_step.q)
    return kernel

