"""Benchmark the numba JIT kernels against the pure-numpy fallback.

Times graph generation and single simulation runs on both backends and
prints a small table. The two paths are bit-identical by construction, so
this is purely a throughput comparison.

Usage:
    python benchmarks/bench_backends.py            # desk-scale (default)
    python benchmarks/bench_backends.py --quick    # small and fast
"""

import argparse
import time

import numpy as np

import polarsim as ps
from polarsim import kernels


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(n, m, t_f, p_re, repeat):
    backends = kernels.available_backends()
    print(f"population n={n}, edges m={m}, steps t_f={t_f}, p_re={p_re}")
    print(f"{'task':<28}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")

    rows = []
    spec = ps.GraphSpec(n=n, m=m, seed=42)
    times = {}
    graphs = {}
    for b in backends:
        ps.generate_scale_free(spec, backend=b)  # warm JIT / caches
        times[b], graphs[b] = _time(lambda b=b: ps.generate_scale_free(spec, backend=b), repeat)
    rows.append(("generate_scale_free", times))

    g = graphs[backends[0]]
    if len(backends) > 1:
        assert np.array_equal(graphs[backends[0]].src, graphs[backends[1]].src)
    parties = ps.assign_parties(g, ps.elite_set(g), ps.PopulationSpec(0.5, 0.5, seed=1))
    pop = ps.init_affect(parties, 2)
    for alpha in (1.0, 10.0):
        params = ps.DynamicsParams(alpha=alpha, p_re=p_re)
        times = {}
        series = {}
        for b in backends:
            ps.run(g, pop, params, 10, seed=3, backend=b)  # warm
            times[b], series[b] = _time(lambda b=b: ps.run(g, pop, params, t_f, seed=3, backend=b), repeat)
        if len(backends) > 1:
            assert np.array_equal(series[backends[0]].ap, series[backends[1]].ap), \
                "backends diverged"
        rows.append((f"run (alpha={alpha:g})", times))

    for name, times in rows:
        cells = "".join(f"{times[b]*1000:>10.1f}ms" for b in backends)
        if len(backends) > 1:
            ratio = times["numpy"] / times["numba"]
            cells += f"{ratio:>9.2f}x"
        print(f"{name:<28}{cells}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="small sizes, single repeat")
    parser.add_argument("--n", type=int, default=None)
    parser.add_argument("--m", type=int, default=None)
    parser.add_argument("--t-f", type=int, default=None)
    parser.add_argument("--p-re", type=float, default=0.12)
    args = parser.parse_args()
    if args.quick:
        n, m, t_f, repeat = 500, 8000, 60, 1
    else:
        n, m, t_f, repeat = 2000, 40_000, 300, 3
    bench(args.n or n, args.m or m, args.t_f or t_f, args.p_re, repeat)


if __name__ == "__main__":
    main()
