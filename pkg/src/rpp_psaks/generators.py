"""Synthetic RPP instances for tests and benchmarks.

``random_instance`` draws small connected instances for oracle checks.
``ur_like`` imitates the random-geometric "ur" benchmark family and
``city_like`` a large street network with a few clustered required
districts.  All generators are deterministic given the seed.
"""
from __future__ import annotations

import math
import random

import numpy as np

from .graph import EdgeMultiset, RppInstance, WeightedMultigraph


def _connect(n: int, edges: set[tuple[int, int]], rng: random.Random) -> None:
    """Add random edges until the graph on ``0..n-1`` is connected."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    roots = sorted({find(x) for x in range(n)})
    for a, b in zip(roots, roots[1:]):
        u = rng.choice([x for x in range(n) if find(x) == find(a)])
        v = rng.choice([x for x in range(n) if find(x) == find(b)])
        edges.add((min(u, v), max(u, v)))
        parent[find(u)] = find(v)


def random_instance(
    rng: random.Random,
    max_vertices: int = 7,
    max_required: int = 9,
    max_weight: int = 10,
    allow_loops: bool = False,
    name: str = "",
) -> RppInstance:
    """Small connected instance with integer weights in ``1..max_weight``.

    Required edges are drawn with replacement among the graph edges (so
    parallel required copies occur); the graph may carry parallel
    non-required edges of different weight.
    """
    n = rng.randint(2, max_vertices)
    pairs = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5}
    _connect(n, pairs, rng)
    pairs = sorted(pairs)
    weight = {p: rng.randint(1, max_weight) for p in pairs}
    k = rng.randint(1, max_required)
    req: list[tuple[int, int, int]] = []
    for _ in range(k):
        if allow_loops and rng.random() < 0.1:
            x = rng.randrange(n)
            req.append((x, x, rng.randint(1, max_weight)))
        else:
            u, v = rng.choice(pairs)
            req.append((u, v, weight[(u, v)]))
    edges = [(u, v, w, 1) for (u, v), w in weight.items()]
    if rng.random() < 0.3:
        u, v = rng.choice(pairs)
        edges.append((u, v, rng.randint(1, max_weight), 1))
    R = EdgeMultiset(req)
    for (u, v, w), m in R.items():
        edges.append((u, v, w, m))
    return RppInstance(WeightedMultigraph(n, tuple(edges)), R, name)


def clustered_instance(
    rng: random.Random,
    max_vertices: int = 7,
    max_required: int = 9,
    max_weight: int = 10,
    name: str = "",
) -> RppInstance:
    """Small instance whose required edges fall into 2 or 3 vertex groups.

    Produces several required components far more often than
    :func:`random_instance`.
    """
    n = rng.randint(4, max_vertices)
    verts = list(range(n))
    rng.shuffle(verts)
    k = rng.randint(2, min(3, n // 2))
    cuts = sorted(rng.sample(range(2, n - 1), k - 1)) if k > 1 else []
    bounds = [0] + cuts + [n]
    groups = [verts[a:b] for a, b in zip(bounds, bounds[1:]) if b - a >= 1]
    pairs = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4}
    inner = []
    for g in groups:
        gp = [(min(a, b), max(a, b)) for i, a in enumerate(g) for b in g[i + 1:]]
        if gp:
            inner.append(gp)
            pairs.add(rng.choice(gp))
    _connect(n, pairs, rng)
    pairs = sorted(pairs)
    weight = {p: rng.randint(1, max_weight) for p in pairs}
    usable = [[p for p in gp if p in weight] for gp in inner]
    usable = [u for u in usable if u]
    req = [rng.choice(u) for u in usable]
    for _ in range(rng.randint(0, max_required - len(req))):
        req.append(rng.choice(rng.choice(usable)))
    edges = [(u, v, w, 1) for (u, v), w in weight.items()]
    R = EdgeMultiset((u, v, weight[(u, v)]) for u, v in req)
    for (u, v, w), m in R.items():
        edges.append((u, v, w, m))
    return RppInstance(WeightedMultigraph(n, tuple(edges)), R, name)


def oracle_corpus(count: int, seed: int = 0) -> list[RppInstance]:
    """Half uniform, half clustered small instances (at most 7 vertices, 9 required edges)."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        gen = random_instance if i % 2 == 0 else clustered_instance
        out.append(gen(rng, name=f"corpus-{seed}-{i}"))
    return out


def random_instances(count: int, seed: int = 0, **kw) -> list[RppInstance]:
    rng = random.Random(seed)
    return [random_instance(rng, name=f"rand-{seed}-{i}", **kw) for i in range(count)]


def _euclid(pts, u, v) -> int:
    return max(1, int(round(math.dist(pts[u], pts[v]))))


def ur_like(n: int, d: int, p: float, seed: int = 0) -> RppInstance:
    """Random points on a 1000x1000 square, each joined to its ``d`` nearest neighbours.

    Every edge is required with probability ``p``; isolated points are then
    attached by a required edge so that ``|V| = |V(R)|``.
    """
    rng = random.Random(seed)
    pts = [(rng.uniform(0, 1000), rng.uniform(0, 1000)) for _ in range(n)]
    arr = np.array(pts)
    d2 = ((arr[:, None, :] - arr[None, :, :]) ** 2).sum(-1)
    np.fill_diagonal(d2, np.inf)
    near = np.argsort(d2, axis=1, kind="stable")[:, :d]
    pairs = {(min(u, int(v)), max(u, int(v))) for u in range(n) for v in near[u]}
    _connect(n, pairs, rng)
    req = {e for e in sorted(pairs) if rng.random() < p}
    touched = {x for e in req for x in e}
    for x in range(n):
        if x not in touched:
            v = int(near[x][0])
            req.add((min(x, v), max(x, v)))
            touched.update((x, v))
    edges = tuple((u, v, _euclid(pts, u, v), 1) for u, v in sorted(pairs))
    R = EdgeMultiset((u, v, _euclid(pts, u, v)) for u, v in sorted(req))
    return RppInstance(WeightedMultigraph(n, edges), R, f"ur-{n}-{d}-{p}")


def city_like(
    vertices: int = 5097,
    grid: int = 26,
    districts: int = 3,
    district_shape: tuple[int, int] = (4, 5),
    spurs: int = 8,
    seed: int = 0,
) -> RppInstance:
    """Street network: a ``grid x grid`` junction lattice whose streets are
    subdivided into short segments, with ``districts`` required areas.

    Each area is a rectangle of junctions whose streets are all required,
    plus a few required side streets.  The subdivision is spread so the
    graph has exactly ``vertices`` vertices.  The defaults match the scale of
    a large municipal snow-plowing instance (about 5100 vertices, 400
    required edges, 3 components).
    """
    rng = random.Random(seed)
    junctions = grid * grid
    streets = [((r, c), (r, c + 1)) for r in range(grid) for c in range(grid - 1)]
    streets += [((r, c), (r + 1, c)) for r in range(grid - 1) for c in range(grid)]
    extra = vertices - junctions
    if extra < 0:
        raise ValueError("vertex count below the junction count")
    cuts = sorted(rng.randrange(extra + 1) for _ in range(len(streets) - 1))
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [extra])]

    def jid(rc):
        return rc[0] * grid + rc[1]

    nxt = junctions
    segments: dict[tuple, list[tuple[int, int, int]]] = {}
    for (a, b), k in zip(streets, sizes):
        chain = [jid(a)] + list(range(nxt, nxt + k)) + [jid(b)]
        nxt += k
        segments[(a, b)] = [(min(x, y), max(x, y), rng.randint(10, 60)) for x, y in zip(chain, chain[1:])]

    chosen: set[tuple] = set()
    h, w = district_shape
    for k in range(districts):
        r0 = 1 + k * (grid - h - 2) // max(districts - 1, 1)
        c0 = 1 + ((k * 7) % max(grid - w - 2, 1))
        area = [(r, c) for r in range(r0, r0 + h) for c in range(c0, c0 + w)]
        inside = set(area)
        chosen.update(s for s in segments if s[0] in inside and s[1] in inside)
        rim = [s for s in segments if (s[0] in inside) != (s[1] in inside)]
        rng.shuffle(rim)
        chosen.update(rim[:spurs // districts + (k < spurs % districts)])
    edges = tuple((u, v, wt, 1) for seg in segments.values() for u, v, wt in seg)
    R = EdgeMultiset(e for s in sorted(chosen) for e in segments[s])
    return RppInstance(WeightedMultigraph(vertices, edges), R, f"city-{vertices}-{districts}")
