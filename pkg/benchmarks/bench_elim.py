"""Time the compiled and pure-Python elimination kernels on the same inputs.

    python3 benchmarks/bench_elim.py [--repeat N]
"""

import argparse
import copy
import random
import timeit

from edgespec import _elim_py
from edgespec.generators import complete, corpus, petersen
from edgespec.linalg import _integer_rows
from edgespec.spectral import edge_laplacian

try:
    from edgespec import _elim
except ImportError:
    _elim = None


def cases():
    for name, g in (("K5", complete(5)), ("Petersen", petersen()), ("random8x12#0", corpus()["random8x12#0"])):
        m = edge_laplacian(g).matrix
        yield f"edge Laplacian {name} ({m.rows}x{m.cols})", _integer_rows(m), m.cols
    rng = random.Random(0)
    for n in (40, 80):
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        yield f"dense random {n}x{n}", rows, n


def time_kernel(kernel, rows, ncols, repeat):
    return min(timeit.repeat(lambda: kernel(copy.deepcopy(rows), ncols), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _elim is None:
        print("compiled kernel not built; only the Python kernel is timed")
    print(f"{'case':<40} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for label, rows, ncols in cases():
        py = time_kernel(_elim_py.echelon, rows, ncols, args.repeat)
        if _elim is None:
            print(f"{label:<40} {py * 1e3:>10.2f}")
            continue
        a, b = copy.deepcopy(rows), copy.deepcopy(rows)
        assert _elim.echelon(a, ncols) == _elim_py.echelon(b, ncols) and a == b
        cy = time_kernel(_elim.echelon, rows, ncols, args.repeat)
        print(f"{label:<40} {py * 1e3:>10.2f} {cy * 1e3:>12.2f} {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
