"""Benchmark the compiled assembly kernels against the pure-numpy lane.

Both lanes implement the same divided-difference contracts; this script
times the two bivariate kernels (the cost drivers) and a full block build
on synthetic data shaped like a real fitting run: Ns total points split
into n support and Ns - n LS points.

Usage:
    python3 benchmarks/bench_assembly.py
    python3 benchmarks/bench_assembly.py --ns 200 --sizes 10 30 50 --repeats 5
"""

import argparse
import time

import numpy as np

from aaalqo import _assembly_py as lane_py

try:
    from aaalqo import _assembly_cy as lane_cy
except ImportError:
    lane_cy = None


def make_case(ns, n, seed=0):
    rng = np.random.default_rng(seed)
    points = rng.uniform(-3.0, 3.0, ns) + 1j * rng.uniform(0.5, 5.0, ns)
    h2 = rng.normal(size=(ns, ns)) + 1j * rng.normal(size=(ns, ns))
    # the kernels take contiguous views, as the block builders hand them
    xi = np.ascontiguousarray(points[:n])
    shat = np.ascontiguousarray(points[n:])
    hmat = np.ascontiguousarray(h2[:n, :n])
    h2_ls_ls = np.ascontiguousarray(h2[n:, n:])
    return xi, shat, hmat, h2_ls_ls


def best_of(repeats, fn, *args):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_lane(lane, xi, shat, hmat, h2_ls_ls, repeats):
    t2d = best_of(repeats, lane.loewner_2d, shat, xi, hmat, h2_ls_ls)
    tu = best_of(repeats, lane.u_matrix, shat, xi, h2_ls_ls)
    return t2d, tu


def check_agreement(xi, shat, hmat, h2_ls_ls):
    for name in ("loewner_2d", "u_matrix"):
        py = getattr(lane_py, name)
        cy = getattr(lane_cy, name)
        if name == "u_matrix":
            got, want = cy(shat, xi, h2_ls_ls), py(shat, xi, h2_ls_ls)
        else:
            got = cy(shat, xi, hmat, h2_ls_ls)
            want = py(shat, xi, hmat, h2_ls_ls)
        scale = np.max(np.abs(want))
        worst = np.max(np.abs(got - want)) / scale
        if worst > 1e-13:
            raise SystemExit(f"lane mismatch in {name}: rel err {worst:.2e}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ns", type=int, default=120,
                        help="total sampling points (default 120)")
    parser.add_argument("--sizes", type=int, nargs="+", default=[18, 40, 62],
                        help="support-set sizes n (default 18 40 62)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="repetitions per timing, best kept (default 3)")
    args = parser.parse_args(argv)

    if lane_cy is None:
        print("compiled lane not built; timing the numpy lane only")

    header = f"{'n':>4} {'m':>4} {'kernel':<10}"
    header += f" {'numpy (ms)':>12}"
    if lane_cy is not None:
        header += f" {'compiled (ms)':>14} {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for n in args.sizes:
        if n >= args.ns:
            print(f"skipping n={n}: needs n < Ns={args.ns}")
            continue
        xi, shat, hmat, h2_ls_ls = make_case(args.ns, n)
        m = args.ns - n
        py2d, pyu = bench_lane(lane_py, xi, shat, hmat, h2_ls_ls, args.repeats)
        rows = [("loewner_2d", py2d), ("u_matrix", pyu)]
        if lane_cy is not None:
            check_agreement(xi, shat, hmat, h2_ls_ls)
            cy2d, cyu = bench_lane(lane_cy, xi, shat, hmat, h2_ls_ls,
                                   args.repeats)
            rows = [("loewner_2d", py2d, cy2d), ("u_matrix", pyu, cyu)]
        for row in rows:
            line = f"{n:>4} {m:>4} {row[0]:<10} {row[1] * 1e3:>12.2f}"
            if len(row) == 3:
                line += f" {row[2] * 1e3:>14.2f} {row[1] / row[2]:>7.1f}x"
            print(line)
    print()
    print("L22 has (Ns - n)^2 rows and n^2 columns; its assembly dominates"
          " the per-iteration cost of a fit.")


if __name__ == "__main__":
    main()
