"""Compare the compiled and pure-Python elimination kernels.

Runs exact ranks of the Vandermonde matrices of the degree-r sequence and of
random dense integer matrices, timing both backends on identical inputs.

    python benchmarks/bench_bareiss.py [--repeat 3]
"""

import argparse
import random
import timeit

from feec_weights import build_complex, UNIT_TRIANGLE
from feec_weights._kernels import _bareiss_py
from feec_weights.linalg import _integer_rows, _rows
from feec_weights.weights import vandermonde

try:
    from feec_weights._kernels import _bareiss
except ImportError:
    _bareiss = None


def cases():
    for r in (4, 6, 8):
        cx = build_complex(UNIT_TRIANGLE, r)
        for k in (0, 1):
            yield f"vandermonde r={r} k={k}", _integer_rows(_rows(vandermonde(cx, r, k).entries))
    rng = random.Random(0)
    for n in (40, 80):
        yield f"random {n}x{n} ints", [[rng.randint(-99, 99) for _ in range(n)] for _ in range(n)]


def bench(fn, rows, repeat):
    def run():
        fn([list(row) for row in rows], len(rows[0]))
    return min(timeit.repeat(run, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _bareiss is None:
        print("compiled kernel not built; only the fallback is timed")
    print(f"{'case':28s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, rows in cases():
        tp = bench(_bareiss_py.eliminate, rows, args.repeat)
        if _bareiss is None:
            print(f"{name:28s} {tp:11.4f}")
            continue
        assert _bareiss.eliminate([list(r) for r in rows], len(rows[0])) == \
            _bareiss_py.eliminate([list(r) for r in rows], len(rows[0]))
        tc = bench(_bareiss.eliminate, rows, args.repeat)
        print(f"{name:28s} {tp:11.4f} {tc:11.4f} {tp / tc:8.2f}x")


if __name__ == "__main__":
    main()
