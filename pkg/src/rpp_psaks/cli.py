"""Command line interface.  Exit codes: 0 success, 1 usage error, 2 data error."""
from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bench import quartiles, read_optima, run_bench, write_csv
from .exact import OracleRefused, exact_small
from .graph import ClosedWalk, GraphError
from .io import FormatError, check_tour, parse_solution, read_instance, write_edgelist, write_solution
from .kernelizer import KernelError, kernelize_metric, size_bounds
from .lifting import expand_tour, lift_solution
from .metric import metric_close
from .solver import InvalidSolution, approx_32, lower_bound, verify_ee
from .trace import TraceFormatError, dumps, loads

DATA_ERRORS = (FormatError, TraceFormatError, GraphError, KernelError, OracleRefused, OSError, ValueError)


def _eps(text: str) -> Fraction:
    try:
        e = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if e <= 0:
        raise argparse.ArgumentTypeError("eps must be positive")
    return e


def _out(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_stats(a) -> int:
    inst = read_instance(a.input)
    st = inst.stats()
    print(" ".join(f"{k}={v}" for k, v in st.items()))
    return 0


def cmd_kernelize(a) -> int:
    inst = read_instance(a.input)
    t0 = time.perf_counter()
    metric = metric_close(inst)
    t1 = time.perf_counter()
    kernel, trace = kernelize_metric(metric.problem(), a.eps, weight_reduce=a.weight_reduce,
                                     gamma_bound=a.gamma_bound)
    t2 = time.perf_counter()
    labels = " ".join(map(str, kernel.labels))
    _out(a.output, write_edgelist(kernel.to_instance(), comment=f"kernel of {Path(a.input).name}\nlabels {labels}"))
    if a.trace:
        Path(a.trace).write_text(dumps(trace))
    st = kernel.stats()
    vb, rb = size_bounds(metric.problem().b, metric.problem().c, trace.eps1)
    print(
        f"kernel V={st['V']} R={st['R']} b={st['b']} c={st['c']} "
        f"(bounds V<={float(vb):g} R<={float(rb):g}) closure_ms={(t1 - t0) * 1000:.0f} "
        f"kernel_ms={(t2 - t1) * 1000:.0f}",
        file=sys.stderr,
    )
    return 0


def cmd_solve(a) -> int:
    inst = read_instance(a.input)
    metric = metric_close(inst)
    problem = metric.problem()
    S = approx_32(problem) if a.method == "approx32" else exact_small(problem)
    tour = expand_tour(metric, S) if inst.required else ClosedWalk((), ())
    _out(a.output, write_solution(tour))
    print(f"weight={tour.weight} lower_bound={lower_bound(problem) + metric.required_offset if inst.required else 0}",
          file=sys.stderr)
    return 0


def cmd_lift(a) -> int:
    inst = read_instance(a.input)
    trace = loads(Path(a.trace).read_text())
    sol = parse_solution(Path(a.solution).read_text())
    try:
        tour = lift_solution(inst, trace, sol)
    except InvalidSolution as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _out(a.output, write_solution(tour))
    print(f"weight={tour.weight}", file=sys.stderr)
    return 0


def cmd_verify(a) -> int:
    inst = read_instance(a.input)
    sol = parse_solution(Path(a.solution).read_text())
    if isinstance(sol, ClosedWalk):
        reason = check_tour(inst, sol)
        weight = sol.weight
    else:
        metric = metric_close(inst)
        idx = metric.index
        problem = metric.problem()
        try:
            local = problem.edges_from_pairs((idx[u], idx[v]) for u, v, _ in sol.expand())
        except KeyError as exc:
            reason, weight = f"vertex {exc.args[0]} is not incident to a required edge", None
        else:
            rep = verify_ee(problem, local)
            reason = None if rep else rep.reason
            weight = inst.required.total_weight + local.total_weight
    if reason:
        print(f"INVALID: {reason}")
        return 2
    print(f"OK weight={weight}")
    return 0


def cmd_bench(a) -> int:
    optima = read_optima(a.optima) if a.optima else None
    recs = run_bench(a.dir, a.eps, weight_reduce=a.weight_reduce, gamma_bound=a.gamma_bound, optima=optima)
    with_opt = optima is not None
    if a.csv in (None, "-"):
        write_csv(recs, sys.stdout, with_opt)
    else:
        with open(a.csv, "w", newline="") as fh:
            write_csv(recs, fh, with_opt)
    if a.quartiles:
        with open(a.quartiles, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(quartiles(recs, with_opt))
    failed = sum(not r.ok for r in recs)
    print(f"{len(recs)} instances, {failed} failed", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rpp-psaks", description="Approximate kernelization for the Rural Postman Problem.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    def kernel_opts(sp):
        sp.add_argument("--eps", type=_eps, required=True)
        sp.add_argument("--weight-reduce", action="store_true",
                        help="split eps evenly and floor the kernel weights")
        sp.add_argument("--gamma-bound", choices=("r", "max"), default="r",
                        help="gamma numerator: w(R) or the max lower bound")

    sp = sub.add_parser("kernelize", help="kernelize an instance")
    kernel_opts(sp)
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("-o", "--output", help="kernel edge list (default stdout)")
    sp.add_argument("-t", "--trace", help="trace file")
    sp.set_defaults(func=cmd_kernelize)

    sp = sub.add_parser("solve", help="solve an instance")
    sp.add_argument("--method", choices=("approx32", "exact"), default="approx32")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("lift", help="lift a kernel solution to the input instance")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("-t", "--trace", required=True)
    sp.add_argument("-s", "--solution", required=True)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("verify", help="check a tour or Eulerian extension")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("-s", "--solution", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bench", help="benchmark a directory of instances")
    kernel_opts(sp)
    sp.add_argument("--dir", required=True)
    sp.add_argument("--csv")
    sp.add_argument("--optima", help="file of 'name optimum' lines")
    sp.add_argument("--quartiles", help="write per-family quartiles CSV")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("stats", help="print instance statistics")
    sp.add_argument("-i", "--input", required=True)
    sp.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return a.func(a)
    except DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
