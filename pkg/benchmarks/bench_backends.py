"""Timing comparison of the numba-compiled hot loops against the pure-numpy
fallback, over the three workloads that dominate production runs: the
steady-state solve, time relaxation, and Monte Carlo trajectories.

Run from the repository root:

    PYTHONPATH=src python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from micromaser import DICKE_PAIR, ModelSpec, assemble, build_kernel
from micromaser.backend import make_backend


def timeit(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    spec = ModelSpec(DICKE_PAIR, 100.0, nbar_th=0.1, gtau=2.5)
    gen = assemble(spec, 600)
    b = gen.bands
    kern = build_kernel(spec, 512)
    thermal = (0.1 / 1.1) ** np.arange(601)
    thermal /= thermal.sum()

    backends = {}
    for name in ("numpy", "numba"):
        try:
            backends[name] = make_backend(name)
        except RuntimeError as exc:
            print(f"{name}: unavailable ({exc})")
    if "numba" in backends:
        # trigger compilation outside the timed region
        be = backends["numba"]
        x = np.empty(601)
        be.gth_solve(b.sub2, b.sub1, b.diag, b.sup1, x)
        be.steady_solve(b.sub2, b.sub1, b.diag, b.sup1, x)
        p = thermal.copy()
        be.ode_relax(b.sub2, b.sub1, b.diag, b.sup1, p, 1e-6, 10_000, 500)
        be.mc_run(kern.p0, kern.p1, kern.p2, spec.N, spec.nbar_th, 1,
                  200.0, 10.0, np.zeros((4, 513)))

    rows = []
    for name, be in backends.items():
        x = np.empty(601)
        t_solve = timeit(lambda: be.gth_solve(b.sub2, b.sub1, b.diag,
                                              b.sup1, x))

        def relax():
            p = thermal.copy()
            be.ode_relax(b.sub2, b.sub1, b.diag, b.sup1, p, 1e-9,
                         5_000_000, 500)
        t_relax = timeit(relax, repeat=2)

        def mc():
            occ = np.zeros((8, 513))
            be.mc_run(kern.p0, kern.p1, kern.p2, spec.N, spec.nbar_th,
                      42, 2000.0, 100.0, occ)
        t_mc = timeit(mc, repeat=2)
        rows.append((name, t_solve, t_relax, t_mc))

    print(f"{'backend':8s} {'gth_solve':>12s} {'ode_relax':>12s} "
          f"{'mc(2e3 lifetimes)':>18s}")
    for name, a, c, d in rows:
        print(f"{name:8s} {a*1e3:10.3f}ms {c:10.3f}s  {d:15.3f}s")
    if len(rows) == 2:
        base = {r[0]: r[1:] for r in rows}
        speedup = [base["numpy"][i] / base["numba"][i] for i in range(3)]
        print(f"{'speedup':8s} {speedup[0]:11.1f}x {speedup[1]:11.1f}x "
              f"{speedup[2]:16.1f}x")


if __name__ == "__main__":
    main()
