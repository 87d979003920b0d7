"""Compare the compiled and pure-Python time-step kernels.

    python3 benchmarks/bench_kernels.py [--M 2000] [--steps 2000] [--p 3]

Reports microseconds per factorization and per step for each available
backend, plus the largest relative difference between their results.
"""
import argparse
import timeit

import numpy as np

from hrlab.pde import assemble, build_grid
from hrlab.pde.backend import load
from hrlab.pde.sweep import bump_source


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--M", type=int, default=2000)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--p", type=float, default=3.0)
    ap.add_argument("--dt", type=float, default=1e-3)
    args = ap.parse_args()

    grid = build_grid(100.0, args.M)
    op = assemble(grid, 5, 1.0)
    A = args.dt * op.bands()
    A[2] += 1.0
    r = grid.interior
    rsig = np.ones_like(r)
    f = bump_source(1.0)(r)
    bsrc = np.zeros_like(r)
    u0 = 0.1 * f

    finals = {}
    for name in ("cython", "python"):
        try:
            mod = load(name)
        except ImportError:
            print(f"{name:>7}: not built")
            continue
        n_fac = max(1, args.steps // 20)
        t_fac = timeit.timeit(lambda: mod.PentaLU(A), number=n_fac) / n_fac
        lu = mod.PentaLU(A)
        u, out = u0.copy(), np.empty_like(u0)

        def run():
            nonlocal u, out
            for _ in range(args.steps):
                mod.imex_step(lu, u, out, args.dt, rsig, args.p, f, bsrc)
                u, out = out, u

        t_step = timeit.timeit(run, number=1) / args.steps
        finals[name] = u.copy()
        print(f"{name:>7}: factor {t_fac * 1e6:9.1f} us   step {t_step * 1e6:8.1f} us   (n={op.n})")
    if len(finals) == 2:
        a, b = finals["cython"], finals["python"]
        print(f"max relative difference after {args.steps} steps: {np.max(np.abs(a - b)) / np.max(np.abs(b)):.2e}")


if __name__ == "__main__":
    main()
