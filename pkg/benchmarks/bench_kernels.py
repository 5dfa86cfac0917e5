"""Compare the numba and numpy polynomial kernels, then time an end-to-end job.

    python benchmarks/bench_kernels.py [--repeat 5] [--sizes 64,256,1024,4096]

The kernel table calls both implementations directly on the same inputs (and
checks they agree).  The end-to-end row runs the Frobenius relation check in
two subprocesses, one with FSETS_DISABLE_NUMBA=1, so it measures what a user
of either backend actually sees.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from fsets import _kernels as K

P = 5

END_TO_END = """
import time
t0 = time.perf_counter()
from fsets.exactfield import Poly, TowerField
from fsets.frobenius import FrobeniusOp, char_poly_frobenius, sample_points, verify_relation
from fsets.groupmodel import CurveParams, ECPoint
t1 = time.perf_counter()
for d, a4, a6 in (([1, 0, 0, 1], 0, 1), ([0, 1, 0, 1], 1, 0)):
    L = TowerField(5, Poly(d, 5))
    E = CurveParams(5, a4, a6)
    pts = sample_points(E, ECPoint(L.t, L.s, E, L), FrobeniusOp(5), count=24, seed=20240531, max_multiple=5)
    assert verify_relation(char_poly_frobenius(E, 5), FrobeniusOp(5), pts)
print(t1 - t0, time.perf_counter() - t1)
"""


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_rows(sizes, repeat):
    impls = K.implementations()
    if "numba" not in impls:
        sys.exit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        a = K.np_trim(rng.integers(0, P, n).astype(np.int64))
        b = K.np_trim(rng.integers(0, P, n // 2 + 1).astype(np.int64))
        # gcd on a pair with a large common factor, the expensive case
        g = K.np_trim(rng.integers(0, P, n // 4 + 1).astype(np.int64))
        ga, gb = K.np_mul(a, g, P), K.np_mul(b, g, P)
        for name, args in (("mul", (a, b, P)), ("divmod", (a, b, P)), ("gcd", (ga, gb, P))):
            out = {}
            for backend in ("numba", "numpy"):
                f = impls[backend][name]
                f(*args)  # compile / warm caches
                out[backend] = best_of(lambda: f(*args), repeat)
            r_nb, r_np = impls["numba"][name](*args), impls["numpy"][name](*args)
            same = all(np.array_equal(x, y) for x, y in zip(r_nb, r_np)) if name == "divmod" else np.array_equal(r_nb, r_np)
            rows.append((name, n, out["numba"], out["numpy"], same))
    return rows


def end_to_end(disable):
    env = dict(os.environ)
    env.pop("FSETS_DISABLE_NUMBA", None)
    if disable:
        env["FSETS_DISABLE_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    imp, run = map(float, res.stdout.split())
    return imp, run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", default="64,256,1024,4096")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'kernel':<8}{'deg':>7}{'numba ms':>12}{'numpy ms':>12}{'speedup':>9}  agree")
    for name, n, t_nb, t_np, same in kernel_rows(sizes, args.repeat):
        print(f"{name:<8}{n:>7}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}{t_np / t_nb:>8.1f}x  {same}")

    print("\nFrobenius relations on both example curves (24 points each), fresh process:")
    for label, disable in (("numba", False), ("numpy", True)):
        imp, run = end_to_end(disable)
        print(f"  {label:<6} import {imp:6.2f}s   work {run:6.2f}s")


if __name__ == "__main__":
    main()
