"""Compare the numba and numpy row reduction kernels over F_p.

    python benchmarks/bench_rref.py [--sizes 20 60 120] [--prime 32003] [--repeat 5]
"""
import argparse
from timeit import timeit

import numpy as np

from periodic_ar import _kernels


def run(kernel, A, p):
    B = A.copy()
    return B, kernel(B, p, B.shape[1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 60, 120])
    ap.add_argument("--prime", type=int, default=32003)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels.rref_inplace_numba is None:
        raise SystemExit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(args.seed)
    p = args.prime
    print(f"{'size':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in args.sizes:
        A = rng.integers(0, p, (n, n), dtype=np.int64)
        # warm the JIT and check both kernels agree
        Bn, pn = run(_kernels.rref_inplace_numba, A, p)
        Bp, pp = run(_kernels.rref_inplace_numpy, A, p)
        assert (Bn == Bp).all() and list(pn) == list(pp)
        t_np = timeit(lambda: run(_kernels.rref_inplace_numpy, A, p), number=args.repeat)
        t_nb = timeit(lambda: run(_kernels.rref_inplace_numba, A, p), number=args.repeat)
        t_np, t_nb = t_np / args.repeat, t_nb / args.repeat
        print(f"{n:>6} {t_np:>10.5f} {t_nb:>10.5f} {t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
