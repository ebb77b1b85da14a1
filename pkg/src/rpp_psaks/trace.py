"""Kernelization trace and its text serialization.

Every step records edges and vertices by their *original* vertex ids, so a
trace can be read next to the input file without the intermediate
relabellings.  Text format, version 1 (one record per line, space
separated, ``#`` starts a comment line)::

    rpp-psaks-trace 1
    eps <p/q>
    eps1 <p/q>
    eps2 <p/q>
    gamma <p/q | inf>
    gamma-bound <r | max>
    terminals <v ...>
    extract <v> <a|b1|b2> removed <u:v:w ...> added <u:v:w ...>
    strip <u:v:w ...>
    delete <v ...>
    matching <u:v:w ...>
    quantum <q> <beta> <N>
    weights <w ...>          # upper triangle of the kernel weights before reduction
    kernel <v ...>
    end

Step lines appear in application order.  An ``u:v:w`` token is one edge
copy; repeated copies repeat the token.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .graph import Edge

TRACE_VERSION = 1
MAGIC = "rpp-psaks-trace"


class TraceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class DeletedVertices:
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class StrippedCycle:
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class Extraction:
    vertex: int
    case: str  # "a", "b1" or "b2"
    removed: tuple[Edge, ...]
    added: tuple[Edge, ...]


@dataclass(frozen=True)
class AddedMatching:
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class WeightQuantum:
    q: Fraction
    beta: int
    N: int
    weights: tuple[int, ...] = ()


Step = Union[DeletedVertices, StrippedCycle, Extraction, AddedMatching, WeightQuantum]


@dataclass
class KernelTrace:
    eps: Fraction
    eps1: Fraction
    eps2: Fraction
    gamma: Fraction | None  # None stands for an infinite threshold
    terminals: tuple[int, ...]
    steps: list[Step] = field(default_factory=list)
    kernel_labels: tuple[int, ...] = ()
    gamma_bound: str = "r"

    def added_matching(self) -> tuple[Edge, ...]:
        return tuple(e for s in self.steps if isinstance(s, AddedMatching) for e in s.edges)

    def extractions(self) -> list[Extraction]:
        return [s for s in self.steps if isinstance(s, Extraction)]

    def quantum(self) -> WeightQuantum | None:
        for s in self.steps:
            if isinstance(s, WeightQuantum):
                return s
        return None


def _edges(tokens) -> tuple[Edge, ...]:
    out = []
    for t in tokens:
        try:
            u, v, w = (int(x) for x in t.split(":"))
        except ValueError:
            raise TraceFormatError(f"bad edge token {t!r}") from None
        out.append((u, v, w))
    return tuple(out)


def _fmt_edges(edges) -> str:
    return " ".join(f"{u}:{v}:{w}" for u, v, w in edges)


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise TraceFormatError(f"bad integer {tok!r}") from None


def _frac(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise TraceFormatError(f"bad rational {tok!r}") from None


def dumps(trace: KernelTrace) -> str:
    lines = [
        f"{MAGIC} {TRACE_VERSION}",
        f"eps {trace.eps}",
        f"eps1 {trace.eps1}",
        f"eps2 {trace.eps2}",
        f"gamma {'inf' if trace.gamma is None else trace.gamma}",
        f"gamma-bound {trace.gamma_bound}",
        "terminals " + " ".join(map(str, trace.terminals)),
    ]
    for s in trace.steps:
        if isinstance(s, Extraction):
            lines.append(
                f"extract {s.vertex} {s.case} removed {_fmt_edges(s.removed)} added {_fmt_edges(s.added)}".rstrip()
            )
        elif isinstance(s, StrippedCycle):
            lines.append("strip " + _fmt_edges(s.edges))
        elif isinstance(s, DeletedVertices):
            lines.append("delete " + " ".join(map(str, s.vertices)))
        elif isinstance(s, AddedMatching):
            lines.append("matching " + _fmt_edges(s.edges))
        elif isinstance(s, WeightQuantum):
            lines.append(f"quantum {s.q} {s.beta} {s.N}")
            lines.append("weights " + " ".join(map(str, s.weights)))
        else:  # pragma: no cover
            raise TypeError(f"unknown step {s!r}")
    lines.append("kernel " + " ".join(map(str, trace.kernel_labels)))
    lines.append("end")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def loads(text: str) -> KernelTrace:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or rows[0][:1] != [MAGIC]:
        raise TraceFormatError("missing trace header")
    if len(rows[0]) != 2 or rows[0][1] != str(TRACE_VERSION):
        raise TraceFormatError(f"unsupported trace version {' '.join(rows[0][1:])!r}")
    head: dict[str, list[str]] = {}
    steps: list[Step] = []
    kernel = None
    ended = False
    pending_quantum = None
    for lineno, row in enumerate(rows[1:], start=2):
        tag, rest = row[0], row[1:]
        if ended:
            raise TraceFormatError(f"record {lineno}: content after 'end'")
        if tag in ("eps", "eps1", "eps2", "gamma", "gamma-bound", "terminals"):
            head[tag] = rest
        elif tag == "extract":
            if len(rest) < 3 or "removed" not in rest or "added" not in rest:
                raise TraceFormatError(f"record {lineno}: malformed extract")
            i, j = rest.index("removed"), rest.index("added")
            if rest[1] not in ("a", "b1", "b2") or not i < j:
                raise TraceFormatError(f"record {lineno}: malformed extract")
            steps.append(Extraction(_int(rest[0]), rest[1], _edges(rest[i + 1:j]), _edges(rest[j + 1:])))
        elif tag == "strip":
            steps.append(StrippedCycle(_edges(rest)))
        elif tag == "delete":
            steps.append(DeletedVertices(tuple(_int(x) for x in rest)))
        elif tag == "matching":
            steps.append(AddedMatching(_edges(rest)))
        elif tag == "quantum":
            if len(rest) != 3:
                raise TraceFormatError(f"record {lineno}: quantum needs q, beta and N")
            pending_quantum = (_frac(rest[0]), _int(rest[1]), _int(rest[2]))
            steps.append(WeightQuantum(*pending_quantum))
        elif tag == "weights":
            if pending_quantum is None or not isinstance(steps[-1], WeightQuantum):
                raise TraceFormatError(f"record {lineno}: weights without quantum")
            steps[-1] = WeightQuantum(*pending_quantum, tuple(_int(x) for x in rest))
        elif tag == "kernel":
            kernel = tuple(_int(x) for x in rest)
        elif tag == "end":
            ended = True
        else:
            raise TraceFormatError(f"record {lineno}: unknown record {tag!r}")
    for key in ("eps", "eps1", "eps2", "gamma", "terminals"):
        if key not in head or (key != "terminals" and len(head[key]) != 1):
            raise TraceFormatError(f"missing or malformed {key!r} record")
    if kernel is None or not ended:
        raise TraceFormatError("truncated trace")
    gamma_tok = head["gamma"][0]
    return KernelTrace(
        eps=_frac(head["eps"][0]),
        eps1=_frac(head["eps1"][0]),
        eps2=_frac(head["eps2"][0]),
        gamma=None if gamma_tok == "inf" else _frac(gamma_tok),
        terminals=tuple(_int(x) for x in head["terminals"]),
        steps=steps,
        kernel_labels=kernel,
        gamma_bound=(head.get("gamma-bound") or ["r"])[0],
    )
