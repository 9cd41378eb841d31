"""Time the pure-numpy kernels against their numba-compiled twins.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeats 9 --scale 2

Set HECONET_DISABLE_NUMBA=1 to confirm the fallback path is the one
being imported (the script then times pure numpy only).
"""

import argparse
import timeit

import numpy as np

from heconet import kernels


def simplex_workload(rng, scale):
    m, n = 30 * scale, 60 * scale
    g = rng.standard_normal((m, n))
    a = np.hstack([g, np.eye(m)])
    b = rng.random(m) + 0.1
    c = np.concatenate([rng.standard_normal(n), np.zeros(m)])
    basis = np.arange(n, n + m, dtype=np.int64)
    in_basis = np.zeros(n + m, dtype=np.bool_)
    in_basis[n:] = True
    binv = np.eye(m)
    return a, b, c, basis, in_basis, binv


def run_simplex(fn, parts):
    a, b, c, basis, in_basis, binv = parts
    # the kernel mutates basis/in_basis/binv; hand it fresh copies
    return fn(a, b, c, basis.copy(), in_basis.copy(), binv.copy(),
              1e-9, 1e-9, 1e-9, 50, 10_000)


def trajectory_workload(rng, scale):
    n_p, n_t, horizon = 40 * scale, 25 * scale, 1500
    return (rng.random((n_p, n_t)), rng.random((n_p, n_t)),
            rng.random(n_p), np.zeros(n_t),
            rng.random((horizon, n_t)), rng.random((horizon, n_t)), 0.5)


def radius_workload(rng, scale):
    n = 200 * scale
    return rng.random((n, n)), 1e-12, 10_000


def best_of(fn, repeats, number):
    return min(timeit.repeat(fn, repeat=repeats, number=number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5,
                    help="timing repetitions per kernel (default 5)")
    ap.add_argument("--number", type=int, default=3,
                    help="calls per repetition (default 3)")
    ap.add_argument("--scale", type=int, default=1,
                    help="problem size multiplier (default 1)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    cases = [
        ("simplex_iterate",
         lambda parts=simplex_workload(rng, args.scale): parts,
         run_simplex,
         kernels.simplex_iterate_py, kernels.simplex_iterate_jit),
        ("esn_trajectory",
         lambda parts=trajectory_workload(rng, args.scale): parts,
         lambda fn, parts: fn(*parts),
         kernels.esn_trajectory_py, kernels.esn_trajectory_jit),
        ("nonneg_power_radius",
         lambda parts=radius_workload(rng, args.scale): parts,
         lambda fn, parts: fn(*parts),
         kernels.nonneg_power_radius_py, kernels.nonneg_power_radius_jit),
    ]

    if not kernels.USING_NUMBA:
        print("numba path unavailable (HECONET_DISABLE_NUMBA set or numba "
              "missing); timing pure numpy only.\n")

    header = f"{'kernel':<22}{'pure numpy':>14}{'numba':>14}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, make, drive, py_fn, jit_fn in cases:
        parts = make()
        t_py = best_of(lambda: drive(py_fn, parts), args.repeats, args.number)
        if jit_fn is not None:
            drive(jit_fn, parts)  # compile before the clock starts
            t_jit = best_of(lambda: drive(jit_fn, parts),
                            args.repeats, args.number)
            print(f"{name:<22}{t_py * 1e3:>11.2f} ms{t_jit * 1e3:>11.2f} ms"
                  f"{t_py / t_jit:>9.1f}x")
        else:
            print(f"{name:<22}{t_py * 1e3:>11.2f} ms{'-':>14}{'-':>10}")


if __name__ == "__main__":
    main()
