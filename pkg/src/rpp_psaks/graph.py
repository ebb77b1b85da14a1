"""Weighted multigraphs, edge multisets and the structural algorithms on them.

Vertex ids are dense 0-based integers.  Undirected edges are stored with
their endpoints ordered (``u <= v``); a loop contributes 2 to the degree of
its vertex.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property

Edge = tuple[int, int, int]


class GraphError(ValueError):
    """Raised when a graph violates the precondition of an operation."""


class NotEulerianError(GraphError):
    pass


def _key(u: int, v: int, w: int) -> Edge:
    return (u, v, w) if u <= v else (v, u, w)


class EdgeMultiset:
    """Immutable multiset of weighted undirected edges.

    Entries are ``(u, v, w)`` triples with ``u <= v``.  ``len()`` counts
    multiplicities, ``+`` is multiset sum and ``-`` subtracts multiplicities
    (clipping at zero).
    """

    __slots__ = ("_counts", "_hash")

    def __init__(self, entries: Mapping[Edge, int] | Iterable[Edge] = ()):
        counts: Counter[Edge] = Counter()
        if isinstance(entries, Mapping):
            for (u, v, w), m in entries.items():
                if m < 0:
                    raise GraphError(f"negative multiplicity for edge {(u, v, w)}")
                if m:
                    counts[_key(u, v, w)] += m
        else:
            for u, v, w in entries:
                counts[_key(u, v, w)] += 1
        for (u, v, w) in counts:
            if u < 0 or w < 0:
                raise GraphError(f"invalid edge {(u, v, w)}")
        self._counts = dict(sorted(counts.items()))
        self._hash: int | None = None

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], weight) -> EdgeMultiset:
        """Build from unweighted pairs; ``weight(u, v)`` supplies each weight."""
        return cls(_key(u, v, int(weight(u, v))) for u, v in pairs)

    def items(self) -> Iterator[tuple[Edge, int]]:
        return iter(self._counts.items())

    def keys(self) -> Iterator[Edge]:
        return iter(self._counts)

    def multiplicity(self, edge: Edge) -> int:
        return self._counts.get(_key(*edge), 0)

    def expand(self) -> list[Edge]:
        """All edges, each repeated by its multiplicity, in sorted order."""
        return [e for e, m in self._counts.items() for _ in range(m)]

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.expand())

    def __len__(self) -> int:
        return sum(self._counts.values())

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __contains__(self, edge) -> bool:
        return self.multiplicity(edge) > 0

    @property
    def total_weight(self) -> int:
        return sum(w * m for (_, _, w), m in self._counts.items())

    def vertices(self) -> frozenset[int]:
        return frozenset(x for (u, v, _) in self._counts for x in (u, v))

    def degrees(self) -> Counter[int]:
        deg: Counter[int] = Counter()
        for (u, v, _), m in self._counts.items():
            deg[u] += m
            deg[v] += m
        return deg

    def __add__(self, other: EdgeMultiset) -> EdgeMultiset:
        c = Counter(self._counts)
        c.update(other._counts)
        return EdgeMultiset(c)

    def __sub__(self, other: EdgeMultiset) -> EdgeMultiset:
        c = Counter(self._counts)
        c.subtract(other._counts)
        return EdgeMultiset({e: m for e, m in c.items() if m > 0})

    def issubset(self, other: EdgeMultiset) -> bool:
        return all(other._counts.get(e, 0) >= m for e, m in self._counts.items())

    def relabel(self, mapping) -> EdgeMultiset:
        """Map endpoints through ``mapping`` (a sequence or dict)."""
        c: Counter[Edge] = Counter()
        for (u, v, w), m in self._counts.items():
            c[_key(mapping[u], mapping[v], w)] += m
        return EdgeMultiset(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeMultiset):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(
            f"{u}-{v}:{w}" + (f"x{m}" if m > 1 else "") for (u, v, w), m in self._counts.items()
        )
        return f"EdgeMultiset({{{body}}})"


@dataclass(frozen=True)
class WeightedMultigraph:
    """Undirected multigraph with non-negative integer edge weights.

    ``edges`` holds ``(u, v, weight, multiplicity)`` with ``u <= v``; entries
    with equal endpoints and weight are merged.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, int, int], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be non-negative")
        merged: Counter[Edge] = Counter()
        for u, v, w, m in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphError(f"edge ({u}, {v}) references a vertex outside [0, {self.vertex_count})")
            if w < 0:
                raise GraphError(f"negative weight on edge ({u}, {v})")
            if m < 1:
                raise GraphError(f"multiplicity must be positive on edge ({u}, {v})")
            merged[_key(u, v, w)] += m
        object.__setattr__(
            self, "edges", tuple((u, v, w, m) for (u, v, w), m in sorted(merged.items()))
        )

    def edge_multiset(self) -> EdgeMultiset:
        return EdgeMultiset({(u, v, w): m for u, v, w, m in self.edges})

    @property
    def edge_count(self) -> int:
        return sum(m for *_, m in self.edges)


@dataclass(frozen=True, eq=False)
class RppInstance:
    """A Rural Postman instance: a multigraph and a required edge multiset."""

    graph: WeightedMultigraph
    required: EdgeMultiset
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.required.issubset(self.graph.edge_multiset()):
            missing = self.required - self.graph.edge_multiset()
            raise GraphError(f"required edges not present in graph: {missing!r}")

    @cached_property
    def b(self) -> int:
        return imbalanced_vertices(self.required)[1]

    @cached_property
    def c(self) -> int:
        return connected_components(self.required)[1]

    @property
    def n(self) -> int:
        return self.graph.vertex_count

    def stats(self) -> dict[str, int]:
        return {
            "V": self.n,
            "VR": len(self.required.vertices()),
            "R": len(self.required),
            "b": self.b,
            "c": self.c,
            "wR": self.required.total_weight,
        }


# --------------------------------------------------------------------------
# structural algorithms


def connected_components(edges: EdgeMultiset) -> tuple[dict[int, int], int]:
    """Component id for every vertex incident to ``edges`` and the count.

    Ids are assigned in ascending order of each component's smallest vertex.
    """
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for u, v, _ in edges.keys():
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        ru, rv = find(u), find(v)
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    comp: dict[int, int] = {}
    ids: dict[int, int] = {}
    for x in sorted(parent):
        r = find(x)
        if r not in ids:
            ids[r] = len(ids)
        comp[x] = ids[r]
    return comp, len(ids)


def imbalanced_vertices(edges: EdgeMultiset) -> tuple[tuple[int, ...], int]:
    """Odd-degree vertices of the edge-induced graph (sorted) and their count."""
    odd = tuple(sorted(v for v, d in edges.degrees().items() if d % 2))
    return odd, len(odd)


def simple_adjacency(edges: EdgeMultiset) -> dict[int, list[int]]:
    """Sorted simple adjacency lists: parallel edges collapsed, loops dropped."""
    adj: dict[int, set[int]] = defaultdict(set)
    for u, v, _ in edges.keys():
        adj[u]
        adj[v]
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return {x: sorted(ns) for x, ns in adj.items()}


def biconnected_blocks(adj: Mapping[int, list[int]]) -> list[list[tuple[int, int]]]:
    """Blocks of a simple graph as lists of edges (iterative Hopcroft-Tarjan).

    Isolated vertices yield no block.  Roots are taken in ascending order and
    neighbours in the order of ``adj``.
    """
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[list[tuple[int, int]]] = []
    t = 0
    for root in sorted(adj):
        if root in disc:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(adj[root]))]
        estack: list[tuple[int, int]] = []
        while stack:
            u, parent, it = stack[-1]
            descended = False
            for w in it:
                if w == parent:
                    continue
                if w not in disc:
                    disc[w] = low[w] = t
                    t += 1
                    estack.append((u, w))
                    stack.append((w, u, iter(adj[w])))
                    descended = True
                    break
                if disc[w] < disc[u]:
                    if disc[w] < low[u]:
                        low[u] = disc[w]
                    estack.append((u, w))
            if descended:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                if low[u] < low[p]:
                    low[p] = low[u]
                if low[u] >= disc[p]:
                    block = []
                    while True:
                        e = estack.pop()
                        block.append(e)
                        if e == (p, u):
                            break
                    blocks.append(block)
    return blocks


@dataclass(frozen=True)
class BlockCutTree:
    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    incidence: tuple[tuple[int, int], ...]  # (block index, cut vertex)
    block_edges: tuple[EdgeMultiset, ...]

    def blocks_of(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]


def block_cut_tree(edges: EdgeMultiset) -> BlockCutTree:
    """Blocks and cut vertices of a connected edge-induced multigraph.

    Parallel edges join the block of their endpoints; a loop joins the first
    block containing its vertex (or forms a one-vertex block on its own).
    """
    _, c = connected_components(edges)
    if c > 1:
        raise GraphError(f"block_cut_tree needs a connected edge set, got {c} components")
    adj = simple_adjacency(edges)
    raw = biconnected_blocks(adj)
    blocks: list[set[int]] = [set(x for e in blk for x in e) for blk in raw]
    edge_block: dict[tuple[int, int], int] = {}
    for i, blk in enumerate(raw):
        for u, v in blk:
            edge_block[(min(u, v), max(u, v))] = i
    loops_only = sorted(x for x, ns in adj.items() if not ns)
    for x in loops_only:
        blocks.append({x})
    per_block: list[Counter[Edge]] = [Counter() for _ in blocks]
    for (u, v, w), m in edges.items():
        if u != v:
            i = edge_block[(u, v)]
        else:
            i = next(j for j, b in enumerate(blocks) if u in b)
        per_block[i][(u, v, w)] += m
    membership: Counter[int] = Counter(x for b in blocks for x in b)
    cuts = frozenset(x for x, k in membership.items() if k >= 2)
    incidence = tuple(
        (i, x) for i, b in enumerate(blocks) for x in sorted(b) if x in cuts
    )
    return BlockCutTree(
        blocks=tuple(frozenset(b) for b in blocks),
        cut_vertices=cuts,
        incidence=incidence,
        block_edges=tuple(EdgeMultiset(c) for c in per_block),
    )


@dataclass(frozen=True)
class ClosedWalk:
    """A closed walk given by its vertex sequence and traversed edges.

    ``edges[i]`` is ``(vertices[i], vertices[i+1], weight)``.  The empty
    walk has no vertices.
    """

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not self.vertices:
            if self.edges:
                raise GraphError("empty vertex sequence with edges")
            return
        if len(self.vertices) != len(self.edges) + 1:
            raise GraphError("walk needs exactly one more vertex than edges")
        if self.vertices[0] != self.vertices[-1]:
            raise GraphError("walk is not closed")
        for i, (u, v, _) in enumerate(self.edges):
            if (u, v) != (self.vertices[i], self.vertices[i + 1]):
                raise GraphError(f"edge {i} does not connect consecutive walk vertices")

    @property
    def weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def edge_multiset(self) -> EdgeMultiset:
        return EdgeMultiset(self.edges)


def euler_circuit(pairs: list[tuple[int, int]], start: int | None = None) -> tuple[list[int], list[int]]:
    """Hierholzer's algorithm over an indexed edge list.

    Returns the vertex sequence and the edge index used for each step.
    Branches are taken in ascending (neighbour, edge index) order.
    """
    if not pairs:
        return [], []
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    deg: Counter[int] = Counter()
    for i, (u, v) in enumerate(pairs):
        adj[u].append((v, i))
        deg[u] += 1
        deg[v] += 1
        if u != v:
            adj[v].append((u, i))
    odd = sorted(x for x, d in deg.items() if d % 2)
    if odd:
        raise NotEulerianError(f"vertex {odd[0]} has odd degree {deg[odd[0]]}")
    for lst in adj.values():
        lst.sort()
    if start is None:
        start = min(adj)
    elif start not in adj:
        raise GraphError(f"start vertex {start} has no edges")
    used = bytearray(len(pairs))
    ptr: dict[int, int] = dict.fromkeys(adj, 0)
    stack = [(start, -1)]
    circuit: list[tuple[int, int]] = []
    while stack:
        v, _ = stack[-1]
        lst = adj[v]
        p = ptr[v]
        while p < len(lst) and used[lst[p][1]]:
            p += 1
        if p == len(lst):
            ptr[v] = p
            circuit.append(stack.pop())
        else:
            w, i = lst[p]
            used[i] = 1
            ptr[v] = p + 1
            stack.append((w, i))
    if len(circuit) != len(pairs) + 1:
        seen = {x for x, _ in circuit}
        stray = min(x for x in adj if x not in seen)
        raise NotEulerianError(
            f"edge set is disconnected: vertex {stray} is not reachable from {start}"
        )
    circuit.reverse()
    return [x for x, _ in circuit], [i for _, i in circuit[1:]]


def euler_tour(edges: EdgeMultiset, start: int | None = None) -> ClosedWalk:
    """Closed walk traversing every edge exactly as often as its multiplicity."""
    flat = edges.expand()
    verts, ids = euler_circuit([(u, v) for u, v, _ in flat], start)
    return ClosedWalk(
        tuple(verts),
        tuple((verts[k], verts[k + 1], flat[i][2]) for k, i in enumerate(ids)),
    )
