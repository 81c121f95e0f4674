#!/usr/bin/env python3
"""Forward-pass benchmark: numba kernel vs the pure-numpy fallback.

Run:
    python benchmarks/bench_forward.py

The numpy path is what you get with GC2GNN_BACKEND=numpy (or without numba
installed); timings here show what that choice costs on the sweep workloads.
"""

import time

import numpy as np

from gc2gnn import ActivationSpec, TreeParams, compile_formula, forward, make_tree, parse, random_graph
from gc2gnn.backend import HAS_NUMBA, default_backend

Q1 = "not (dia>=1 (not (dia>=2 top)))"


def time_forward(spec, graph, act, backend, repeats=5):
    forward(spec, graph, act, backend=backend)  # warm-up (JIT compile, caches)
    t0 = time.perf_counter()
    for _ in range(repeats):
        forward(spec, graph, act, backend=backend)
    return (time.perf_counter() - t0) / repeats


def main():
    print(f"numba importable: {HAS_NUMBA}; default backend: {default_backend()}")
    spec = compile_formula(parse(Q1, 1), 1)

    workloads = []
    tree, _ = make_tree(TreeParams(1, 60, 60))
    workloads.append((f"tree n={tree.n}, step-arctan m=14", tree, ActivationSpec("step-arctan", 14)))
    workloads.append((f"tree n={tree.n}, arctan-4pi m=12", tree, ActivationSpec("arctan-4pi", 12)))
    graph = random_graph(2000, 5.0, 1, 7)
    workloads.append((f"random n={graph.n} avg-deg 5, sigma-star", graph, ActivationSpec("sigma-star", 1)))
    workloads.append((f"random n={graph.n} avg-deg 5, sigmoid", graph, ActivationSpec("sigmoid", 1)))

    print(f"{'workload':45s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for label, g, act in workloads:
        t_np = time_forward(spec, g, act, "numpy")
        if HAS_NUMBA:
            t_nb = time_forward(spec, g, act, "numba")
            print(f"{label:45s} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms {t_np / t_nb:7.1f}x")
        else:
            print(f"{label:45s} {t_np * 1e3:9.2f}ms {'n/a':>10s} {'':>8s}")

    # cross-backend agreement on a smooth activation
    if HAS_NUMBA:
        act = ActivationSpec("step-arctan", 14)
        a = forward(spec, tree, act, backend="numba").history
        b = forward(spec, tree, act, backend="numpy").history
        print(f"max |numba - numpy| on the tree workload: {np.abs(a - b).max():.3e}")


if __name__ == "__main__":
    main()
