"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 50 200 500] [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from jts import kernels


def problem(n, seed=0):
    rng = np.random.default_rng(seed)
    q = list(rng.uniform(-2, 2, n))
    b = list(rng.uniform(0.5, 2, n - 1))
    lam = kernels.backend("python").eigvalsh(q, b)
    w = kernels.backend("python").first_weights(q, b, lam)
    # interlaced partner spectrum without the near-coincidences a real pair has
    mus = [(x + y) / 2 for x, y in zip(lam, lam[1:])] + [lam[-1] + 1.0]
    return q, b, lam, w, mus


def cases(mod, q, b, lam, w, mus):
    return {
        "eigvalsh": lambda: mod.eigvalsh(q, b),
        "first_weights": lambda: mod.first_weights(q, b, lam),
        "rank_one_weights": lambda: mod.rank_one_weights(lam, mus, 1.0),
        "stieltjes": lambda: mod.stieltjes(lam, w, 1e-24),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 200, 500])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled is None:
        raise SystemExit("compiled kernels not built; run pip install -e . first")

    print(f"{'kernel':<18}{'n':>6}{'python [s]':>14}{'c [s]':>12}{'speedup':>10}")
    for n in args.sizes:
        data = problem(n)
        py = cases(kernels.backend("python"), *data)
        c = cases(kernels.backend("c"), *data)
        for name in py:
            t_py = min(timeit.repeat(py[name], number=1, repeat=args.repeat))
            t_c = min(timeit.repeat(c[name], number=1, repeat=args.repeat))
            print(f"{name:<18}{n:>6}{t_py:>14.4f}{t_c:>12.5f}{t_py / t_c:>10.1f}")


if __name__ == "__main__":
    main()
