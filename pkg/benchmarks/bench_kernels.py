"""Numba kernels against their pure fallbacks.

    python benchmarks/bench_kernels.py            # kernel timings, both backends
    python benchmarks/bench_kernels.py --e2e      # also a full ball build per backend

The end-to-end run starts a child interpreter with and without
ARCCURVE_DISABLE_NUMBA=1, since the backend is fixed at import time.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from arccurve import kernels
from arccurve.registry import flip_ball
from arccurve.surface import Surface
from arccurve.triangulation import base_triangulation


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workload(g, n, radius, rows):
    reg = flip_ball(base_triangulation(Surface(g, n)), radius)
    deep = max(reg.nodes, key=lambda nd: nd.depth)
    moves = np.asarray(deep.moves, dtype=np.int64).reshape(-1, 7)
    rng = np.random.default_rng(0)
    curves = rng.integers(0, 6, size=(rows, reg.base.num_edges)).astype(np.int64)
    return reg, moves, curves


def bench(repeat):
    if not kernels.USE_NUMBA:
        print("numba disabled by ARCCURVE_DISABLE_NUMBA; only the fallback is timed")
    cases = []
    reg, moves, curves = workload(1, 2, 5, 20000)
    quads = moves[:, 2:]
    cases.append(("transport_rows", lambda: kernels.transport_rows_py(curves.copy(), quads),
                  lambda: kernels._transport_rows_nb(curves.copy(), quads)))
    node = reg.nodes[0]
    xs = np.repeat(node.base_arcs, 400, axis=0)
    sts = np.repeat(node.base_ends, 400, axis=0)
    cases.append(("flip_arcs", lambda: kernels.flip_arcs_py(xs.copy(), sts.copy(), moves),
                  lambda: kernels._flip_arcs_nb(xs.copy(), sts.copy(), moves)))
    tri = reg.nodes[-1].tri
    iota = np.asarray(tri.iota, dtype=np.int64)
    punct = np.asarray(tri.punct, dtype=np.int64)
    cases.append(("canonical_code", lambda: kernels.canonical_code_py(iota, punct, True),
                  lambda: kernels._canonical_code_nb(iota, punct, True)))
    print(f"{'kernel':<16}{'python':>12}{'numba':>12}{'speedup':>10}")
    for name, py, nb in cases:
        t_py = best_of(py, repeat)
        if kernels.USE_NUMBA:
            nb()  # compile
            t_nb = best_of(nb, repeat)
            print(f"{name:<16}{t_py * 1e3:>10.2f}ms{t_nb * 1e3:>10.2f}ms{t_py / t_nb:>9.1f}x")
        else:
            print(f"{name:<16}{t_py * 1e3:>10.2f}ms{'-':>12}{'-':>10}")


E2E = ("import time; from arccurve.complex import build_ball; from arccurve.surface import Surface;"
       "build_ball(Surface(0, 4), 'AC', 2, 6); t = time.perf_counter();"
       "build_ball(Surface(1, 2), 'AC', 5, 16); print(time.perf_counter() - t)")


def end_to_end():
    for label, flag in (("numba", "0"), ("python", "1")):
        env = dict(os.environ, ARCCURVE_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True,
                             text=True, check=True)
        print(f"build_ball S(1,2) r=5 W=16 [{label}]: {float(out.stdout):.2f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--e2e", action="store_true")
    args = ap.parse_args()
    bench(args.repeat)
    if args.e2e:
        end_to_end()


if __name__ == "__main__":
    main()
