"""Benchmark harness: kernelize a directory of instances and tabulate the effect.

Per instance: parse, metric closure, 3/2-approximation on the input
(``wW``), kernelize (timed, closure excluded), 3/2-approximation on the
kernel, lift to the input (``wWk``).  Columns::

    name,V,VR,R,b,c,wW,Vk,Rk,wWk,ms,rV,rVR,rR,rW[,rOpt]

``rV = Vk/V``, ``rVR = Vk/VR``, ``rR = Rk/R``, ``rW = wWk/wW`` and
``rOpt = wWk/opt`` when an optima file is given.  A file that fails to
parse or solve yields a row with only its name.
"""
from __future__ import annotations

import csv
import logging
import re
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .io import check_tour, read_instance
from .kernelizer import kernelize_metric
from .lifting import expand_tour, lift_solution
from .metric import metric_close
from .solver import approx_32

log = logging.getLogger(__name__)

HEADER = ["name", "V", "VR", "R", "b", "c", "wW", "Vk", "Rk", "wWk", "ms", "rV", "rVR", "rR", "rW"]
RATIOS = ("rV", "rVR", "rR", "rW")


@dataclass
class BenchRecord:
    name: str
    V: int | None = None
    VR: int | None = None
    R: int | None = None
    b: int | None = None
    c: int | None = None
    wW: int | None = None
    Vk: int | None = None
    Rk: int | None = None
    wWk: int | None = None
    ms: int | None = None
    opt: int | None = None
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error

    def ratio(self, key: str) -> float | None:
        num, den = {
            "rV": (self.Vk, self.V),
            "rVR": (self.Vk, self.VR),
            "rR": (self.Rk, self.R),
            "rW": (self.wWk, self.wW),
            "rOpt": (self.wWk, self.opt),
        }[key]
        if num is None or not den:
            return None
        return num / den

    def row(self, with_opt: bool) -> list[str]:
        if not self.ok:
            return [self.name] + [""] * (len(HEADER) - 1 + with_opt)
        raw = [self.name] + [str(getattr(self, k)) for k in HEADER[1:11]]
        keys = RATIOS + (("rOpt",) if with_opt else ())
        for k in keys:
            r = self.ratio(k)
            raw.append("" if r is None else f"{r:.4f}")
        return raw


def bench_instance(path, eps, *, weight_reduce: bool = False, gamma_bound: str = "r",
                   opt: int | None = None) -> BenchRecord:
    path = Path(path)
    rec = BenchRecord(path.stem, opt=opt)
    try:
        inst = read_instance(path)
        metric = metric_close(inst)
        problem = metric.problem()
        st = inst.stats()
        rec.V, rec.VR, rec.R, rec.b, rec.c = inst.n, st["VR"], st["R"], st["b"], st["c"]
        direct = expand_tour(metric, approx_32(problem))
        rec.wW = direct.weight
        t0 = time.perf_counter()
        kernel, trace = kernelize_metric(problem, eps, weight_reduce=weight_reduce, gamma_bound=gamma_bound)
        rec.ms = int(round((time.perf_counter() - t0) * 1000))
        rec.Vk, rec.Rk = kernel.n, len(kernel.required)
        tour = lift_solution(inst, trace, approx_32(kernel), kernel=kernel, metric=metric)
        bad = check_tour(inst, tour)
        if bad:
            raise RuntimeError(f"lifted tour invalid: {bad}")
        rec.wWk = tour.weight
    except Exception as exc:  # a bad file must not stop the run
        log.warning("%s: %s", path.name, exc)
        return BenchRecord(path.stem, error=str(exc) or type(exc).__name__)
    return rec


def read_optima(path) -> dict[str, int]:
    """``name value`` pairs, whitespace or comma separated; ``#`` comments."""
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = re.split(r"[\s,;]+", line)
        if len(parts) >= 2:
            try:
                out[parts[0]] = int(float(parts[1]))
            except ValueError:
                continue
    return out


def run_bench(directory, eps, *, weight_reduce: bool = False, gamma_bound: str = "r",
              optima: dict[str, int] | None = None, pattern: str = "*") -> list[BenchRecord]:
    """Records for every regular file in ``directory``, in sorted file-name order."""
    files = sorted(p for p in Path(directory).glob(pattern) if p.is_file() and not p.name.startswith("."))
    optima = optima or {}
    return [
        bench_instance(p, eps, weight_reduce=weight_reduce, gamma_bound=gamma_bound, opt=optima.get(p.stem))
        for p in files
    ]


def write_csv(records: list[BenchRecord], fh, with_opt: bool = False) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(HEADER + (["rOpt"] if with_opt else []))
    for r in records:
        w.writerow(r.row(with_opt))


def family(name: str) -> str:
    """Instance family from a file name: ``alba-0.7-2`` -> ``alba``, ``ur-500-6-0.75`` -> ``ur-500``."""
    toks = [t for t in re.split(r"[-_\s]+", name.lower()) if t]
    if not toks:
        return name
    head = re.sub(r"\d+$", "", toks[0]) or toks[0]
    if head == "ur" and len(toks) > 1:
        return f"ur-{toks[1]}"
    return head


def quartiles(records: list[BenchRecord], with_opt: bool = False) -> list[list[str]]:
    """Rows ``family,column,n,min,q1,median,q3,max`` over the successful records."""
    groups: dict[str, list[BenchRecord]] = {}
    for r in records:
        if r.ok:
            groups.setdefault(family(r.name), []).append(r)
    keys = RATIOS + (("rOpt",) if with_opt else ())
    rows = [["family", "column", "n", "min", "q1", "median", "q3", "max"]]
    for fam in sorted(groups):
        for k in keys:
            vals = [v for v in (r.ratio(k) for r in groups[fam]) if v is not None]
            if not vals:
                continue
            q = np.percentile(vals, [0, 25, 50, 75, 100])
            rows.append([fam, k, str(len(vals))] + [f"{x:.4f}" for x in q])
    return rows
