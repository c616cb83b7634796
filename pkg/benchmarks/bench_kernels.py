"""Compare the compiled and numpy kernels on the two hot loops.

    python benchmarks/bench_kernels.py [--cells 400] [--lines 200] [--repeat 5]

Prints the best-of-N wall time per call and the speedup.
"""

import argparse
import timeit

import numpy as np

from twofluid import backend
from twofluid.lab.scenarios import build_soliton2d
from twofluid.state import PhysParams


def _states(nx, ny):
    sc = build_soliton2d(nx, ny)
    rng = np.random.default_rng(0)
    u = sc.field.data.copy()
    u[..., 1:4] += 0.01 * rng.normal(size=u[..., 1:4].shape) * u[..., :1]
    return u, sc.params


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--cells", type=int, default=400, help="cells per line")
    ap.add_argument("--lines", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    u, P = _states(args.cells, args.lines)
    lines = np.ascontiguousarray(np.moveaxis(u[:, 2:-2], 0, 1))
    stiff = PhysParams(lambda_m=25.0, r_hat_g=1e-4, lambda_hat_d=1.0)
    cells = np.ascontiguousarray(u[2:-2, 2:-2].reshape(-1, u.shape[-1]))
    rhs = np.zeros_like(cells)

    kernels = backend.available_backends()
    print(f"{args.lines} lines x {args.cells} cells, threads={backend.num_threads()}, backends={kernels}")
    rows = []
    for k in kernels:
        for order in (1, 2):
            t = bench(lambda: backend.line_fluxes(lines, 0, order, P, k), args.repeat)
            rows.append((k, f"line_fluxes o{order}", t))
        t = bench(lambda: backend.imex_update(cells, rhs, 1e-3, stiff, k), args.repeat)
        rows.append((k, "imex_update", t))
    ref = {op: t for k, op, t in rows if k == "numpy"}
    for k, op, t in rows:
        print(f"{k:>7}  {op:<16} {t * 1e3:9.2f} ms   x{ref[op] / t:6.1f}")


if __name__ == "__main__":
    main()
