"""Instance, solution and trace files.

Corberán dialect (benchmark files, 1-based vertex ids)::

    NOMBRE : ALBA_3_1
    COMENTARIO : any text
    VERTICES : 116
    ARISTAS_REQ : 51
    ARISTAS_NOREQ : 120
    LISTA_ARISTAS_REQ :
    ( 1, 2)  coste 8
    ...
    LISTA_ARISTAS_NOREQ :
    ( 3, 5)  coste 11
    ...

Header keys are case-insensitive and accept English synonyms (NAME,
COMMENT, NODES, REQUIRED EDGES, ...); unknown keys only warn.  Edge lines
may omit the parentheses or the ``coste``/``cost`` word.

Canonical edge list (0-based, exact)::

    # comment
    v <count>
    e <u> <v> <w> <required 0|1> <multiplicity>
"""
from __future__ import annotations

import re
import warnings
from collections import Counter
from pathlib import Path

from .graph import ClosedWalk, EdgeMultiset, GraphError, RppInstance, WeightedMultigraph


class FormatError(ValueError):
    """Malformed input; the message starts with the offending line number."""

    def __init__(self, lineno: int | None, msg: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


class FormatWarning(UserWarning):
    pass


# --------------------------------------------------------------------------
# Corberán dialect

_KEYS = {
    "NOMBRE": "name", "NAME": "name",
    "COMENTARIO": "comment", "COMMENT": "comment",
    "VERTICES": "vertices", "NODES": "vertices", "NODOS": "vertices",
    "ARISTAS_REQ": "nreq", "REQUIRED_EDGES": "nreq", "ARISTAS_REQUERIDAS": "nreq",
    "ARISTAS_NOREQ": "nnoreq", "NON_REQUIRED_EDGES": "nnoreq", "NONREQUIRED_EDGES": "nnoreq",
    "ARISTAS": "nedges", "EDGES": "nedges",
    "DEPOSITO": "depot", "DEPOT": "depot",
}
_SECTIONS = {
    "LISTA_ARISTAS_REQ": True, "LIST_REQUIRED_EDGES": True, "REQUIRED_EDGE_LIST": True,
    "LISTA_ARISTAS_NOREQ": False, "LIST_NON_REQUIRED_EDGES": False, "NON_REQUIRED_EDGE_LIST": False,
    "LIST_NONREQUIRED_EDGES": False,
}
_EDGE = re.compile(r"^\(?\s*(-?\d+)\s*[,\s]\s*(-?\d+)\s*\)?\s*(?:coste?|cost)?\s*[:=]?\s*(-?\d+)\s*$", re.I)


def _norm_key(s: str) -> str:
    return re.sub(r"[\s\-]+", "_", s.strip().upper())


def parse_corberan(text: str, name: str = "") -> RppInstance:
    """Parse a Corberán-style RPP file into an instance with 0-based ids."""
    header: dict[str, str] = {}
    section: bool | None = None
    req: list[tuple[int, int, int, int]] = []
    noreq: list[tuple[int, int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _EDGE.match(line)
        if m:
            if section is None:
                raise FormatError(lineno, "edge line before any edge list header")
            u, v, w = (int(x) for x in m.groups())
            (req if section else noreq).append((u, v, w, lineno))
            continue
        key, sep, value = line.partition(":")
        nk = _norm_key(key)
        if nk in ("END", "FIN", "EOF"):
            break
        if nk in _SECTIONS:
            section = _SECTIONS[nk]
            continue
        if not sep:
            raise FormatError(lineno, f"cannot parse {line!r}")
        if nk in _KEYS:
            header[_KEYS[nk]] = value.strip()
        else:
            warnings.warn(f"line {lineno}: unknown header key {key.strip()!r} ignored", FormatWarning, stacklevel=2)
    if "vertices" not in header:
        raise FormatError(None, "missing VERTICES header")
    try:
        n = int(header["vertices"])
    except ValueError:
        raise FormatError(None, f"bad vertex count {header['vertices']!r}") from None
    for key, lst in (("nreq", req), ("nnoreq", noreq)):
        if key in header and header[key].isdigit() and int(header[key]) != len(lst):
            warnings.warn(f"header declares {header[key]} edges in a list of {len(lst)}", FormatWarning, stacklevel=2)

    def conv(u, v, w, lineno):
        for x in (u, v):
            if not 1 <= x <= n:
                raise FormatError(lineno, f"vertex {x} not declared (VERTICES : {n})")
        if w < 0:
            raise FormatError(lineno, f"negative cost {w}")
        u, v = u - 1, v - 1
        return (u, v, w) if u <= v else (v, u, w)

    R = Counter(conv(*e) for e in req)
    other = Counter(conv(*e) for e in noreq)
    edges = tuple((u, v, w, m) for (u, v, w), m in sorted((R + other).items()))
    inst_name = name or header.get("name", "")
    return RppInstance(WeightedMultigraph(n, edges), EdgeMultiset(dict(R)), inst_name)


# --------------------------------------------------------------------------
# canonical edge list


def parse_edgelist(text: str, name: str = "") -> RppInstance:
    n = None
    edges: list[tuple[int, int, int, int]] = []
    req: Counter = Counter()
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        f = line.split()
        if f[0] == "v":
            if n is not None:
                raise FormatError(lineno, "duplicate 'v' header")
            if len(f) != 2:
                raise FormatError(lineno, "'v' header takes exactly one count")
            n = _int(f[1], lineno)
            if n < 0:
                raise FormatError(lineno, "negative vertex count")
        elif f[0] == "e":
            if n is None:
                raise FormatError(lineno, "edge before the 'v' header")
            if len(f) != 6:
                raise FormatError(lineno, f"edge needs 5 fields (u v w required multiplicity), got {len(f) - 1}")
            u, v, w, r, m = (_int(x, lineno) for x in f[1:])
            if w < 0:
                raise FormatError(lineno, f"negative weight {w}")
            if m < 1:
                raise FormatError(lineno, f"multiplicity must be positive, got {m}")
            if r not in (0, 1):
                raise FormatError(lineno, f"required flag must be 0 or 1, got {r}")
            for x in (u, v):
                if not 0 <= x < n:
                    raise FormatError(lineno, f"vertex {x} out of range 0..{n - 1}")
            if u > v:
                u, v = v, u
            edges.append((u, v, w, m))
            if r:
                req[(u, v, w)] += m
        else:
            raise FormatError(lineno, f"unknown record {f[0]!r}")
    if n is None:
        raise FormatError(None, "missing 'v' header")
    try:
        return RppInstance(WeightedMultigraph(n, tuple(edges)), EdgeMultiset(dict(req)), name)
    except GraphError as exc:
        raise FormatError(None, str(exc)) from None


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(lineno, f"expected an integer, got {tok!r}") from None


def write_edgelist(instance: RppInstance, comment: str | None = None) -> str:
    """Canonical text; edges sorted by (u, v, w, required)."""
    R = instance.required
    rows = []
    for (u, v, w), m in sorted(instance.graph.edge_multiset().items()):
        r = R.multiplicity((u, v, w))
        if m - r:
            rows.append((u, v, w, 0, m - r))
        if r:
            rows.append((u, v, w, 1, r))
    rows.sort()
    out = []
    if comment:
        out.extend(f"# {ln}" for ln in comment.splitlines())
    out.append(f"v {instance.n}")
    out.extend(f"e {u} {v} {w} {r} {m}" for u, v, w, r, m in rows)
    return "\n".join(out) + "\n"


def read_instance(path) -> RppInstance:
    """Read either format, chosen by content (a ``v`` header means edge list)."""
    path = Path(path)
    text = path.read_text()
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if s.split()[0] == "v":
            return parse_edgelist(text, name=path.stem)
        break
    return parse_corberan(text, name=path.stem)


# --------------------------------------------------------------------------
# solutions


def write_solution(sol: ClosedWalk | EdgeMultiset) -> str:
    """``rpp-solution 1`` text for a tour (``step`` lines) or an extension (``s`` lines)."""
    if isinstance(sol, ClosedWalk):
        lines = ["rpp-solution 1", "kind walk", f"weight {sol.weight}"]
        lines += [f"step {u} {v} {w}" for u, v, w in sol.edges]
    else:
        lines = ["rpp-solution 1", "kind ee", f"weight {sol.total_weight}"]
        lines += [f"s {u} {v} {w} {m}" for (u, v, w), m in sol.items()]
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> ClosedWalk | EdgeMultiset:
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), start=1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0][1] != ["rpp-solution", "1"]:
        raise FormatError(lines[0][0] if lines else None, "missing 'rpp-solution 1' header")
    kind = weight = None
    steps = []
    ee = {}
    for lineno, f in lines[1:]:
        if f[0] == "kind" and len(f) == 2 and f[1] in ("walk", "ee"):
            kind = f[1]
        elif f[0] == "weight" and len(f) == 2:
            weight = _int(f[1], lineno)
        elif f[0] == "step" and len(f) == 4:
            steps.append(tuple(_int(x, lineno) for x in f[1:]))
        elif f[0] == "s" and len(f) == 5:
            u, v, w, m = (_int(x, lineno) for x in f[1:])
            if m < 1:
                raise FormatError(lineno, "multiplicity must be positive")
            key = (min(u, v), max(u, v), w)
            ee[key] = ee.get(key, 0) + m
        else:
            raise FormatError(lineno, f"unexpected record {' '.join(f)!r}")
    if kind is None:
        raise FormatError(None, "missing 'kind' record")
    if kind == "walk":
        if not steps:
            sol = ClosedWalk((), ())
        else:
            verts = (steps[0][0],) + tuple(v for _, v, _ in steps)
            try:
                sol = ClosedWalk(verts, tuple(steps))
            except GraphError as exc:
                raise FormatError(None, str(exc)) from None
        total = sol.weight
    else:
        sol = EdgeMultiset(ee)
        total = sol.total_weight
    if weight is not None and weight != total:
        raise FormatError(None, f"declared weight {weight} but edges sum to {total}")
    return sol


def check_tour(instance: RppInstance, walk: ClosedWalk) -> str | None:
    """None if ``walk`` is an RPP tour of ``instance``, otherwise the reason."""
    if not instance.required:
        return None
    if not walk.vertices:
        return "empty walk"
    avail = instance.graph.edge_multiset()
    for u, v, w in walk.edges:
        key = (min(u, v), max(u, v), w)
        if not avail.multiplicity(key):
            return f"edge ({u}, {v}) with weight {w} is not in the graph"
    traversed = walk.edge_multiset()
    if not instance.required.issubset(traversed):
        u, v, w = (instance.required - traversed).expand()[0]
        return f"required edge ({u}, {v}) with weight {w} is not traversed"
    return None
