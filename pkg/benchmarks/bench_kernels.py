"""Compiled vs pure-Python shortest paths, the hot loop of the metric closure.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--vertices 5097]

Times ``sssp_many`` from every required vertex of a street-network instance
with both backends, checks that they agree, and prints one line per backend.
"""
import argparse
import time

import numpy as np

from rpp_psaks import _kernels
from rpp_psaks.generators import city_like, ur_like
from rpp_psaks.metric import _csr


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(inst, repeat):
    indptr, indices, weights, _ = _csr(inst.graph)
    sources = np.array(sorted(inst.required.vertices()), dtype=np.int64)
    print(f"{inst.name}: |V|={inst.n} sources={len(sources)}")
    t_py, (d_py, p_py) = best_of(lambda: _kernels.python_sssp_many(indptr, indices, weights, sources), repeat)
    print(f"  python   {t_py * 1000:9.1f} ms")
    if _kernels.BACKEND != "compiled":
        print("  compiled  (extension not built)")
        return
    t_c, (d_c, p_c) = best_of(lambda: _kernels.sssp_many(indptr, indices, weights, sources), repeat)
    same = np.array_equal(d_py, d_c) and np.array_equal(p_py, p_c)
    print(f"  compiled {t_c * 1000:9.1f} ms  speedup {t_py / t_c:5.1f}x  identical={same}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--vertices", type=int, default=5097)
    a = ap.parse_args()
    run(ur_like(500, 6, 0.5, seed=1), a.repeat)
    run(city_like(vertices=a.vertices, seed=0), a.repeat)


if __name__ == "__main__":
    main()
