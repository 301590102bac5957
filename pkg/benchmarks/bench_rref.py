"""Compiled versus pure-Python reduction kernel.

    python benchmarks/bench_rref.py [--repeat 3]

Times ``rref`` on seeded random sparse integer matrices with each backend and
one full Hochschild table per backend (the table run switches kernels through
``HHBV_PURE_PYTHON``).  Both backends must return identical echelon forms.
The incidence cases overflow int64 during fraction-free elimination, so the
compiled backend takes its modular lift there.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from hhbv.linalg import HAVE_COMPILED, rref

TABLE_SNIPPET = (
    "from hhbv.algebra import builtin_algebra; from hhbv.hochschild.table import compute_table; "
    "import time; t = time.perf_counter(); compute_table(builtin_algebra('mat2'), P=6); "
    "print(time.perf_counter() - t)"
)


def random_rows(rng, nrows, ncols, density):
    rows = []
    for _ in range(nrows):
        rows.append({c: rng.randint(-5, 5) for c in range(ncols) if rng.random() < density})
    return rows


def incidence_rows(rng, nrows, ncols, k=3):
    # few +-1 entries per row, like the bar differentials
    return [{c: rng.choice((-1, 1)) for c in rng.sample(range(ncols), k)} for _ in range(nrows)]


def bench_matrices(repeat):
    rng = random.Random(0)
    print(f"{'kind':>10} {'shape':>12} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    cases = [("random", n, lambda n=n, d=d: random_rows(rng, n, n, d)) for n, d in ((100, 0.1), (200, 0.05), (150, 0.2))]
    cases += [("incidence", n, lambda n=n: incidence_rows(rng, n, n)) for n in (500, 1500, 3000)]
    for kind, n, make in cases:
        rows = make()
        ref = rref(rows, n, backend="python")
        tp = min(timeit.repeat(lambda: rref(rows, n, backend="python"), number=1, repeat=repeat))
        if HAVE_COMPILED:
            got = rref(rows, n, backend="cython")
            assert got.pivots == ref.pivots and got.rows == ref.rows, "backends disagree"
            tc = min(timeit.repeat(lambda: rref(rows, n, backend="cython"), number=1, repeat=repeat))
            print(f"{kind:>10} {n:>5} x {n:<5} {tp:>10.3f} {tc:>10.3f} {tp / tc:>7.1f}x")
        else:
            print(f"{kind:>10} {n:>5} x {n:<5} {tp:>10.3f} {'n/a':>10} {'n/a':>8}")


def bench_table():
    out = {}
    for label, pure in (("python", "1"), ("cython", "0")):
        if label == "cython" and not HAVE_COMPILED:
            continue
        env = dict(os.environ, HHBV_PURE_PYTHON=pure)
        r = subprocess.run([sys.executable, "-c", TABLE_SNIPPET], env=env, capture_output=True, text=True, check=True)
        out[label] = float(r.stdout)
    print("mat2 table, P = 6: " + ", ".join(f"{k} {v:.2f} s" for k, v in out.items()))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"compiled kernel available: {HAVE_COMPILED}")
    bench_matrices(args.repeat)
    bench_table()


if __name__ == "__main__":
    main()
