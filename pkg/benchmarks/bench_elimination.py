"""Benchmark the compiled Bareiss kernel against the pure-Python fallback.

Two workloads:

* random dense integer matrices of growing size;
* the differential matrices a cohomology truncation actually assembles
  (grade 1 and grade 2 over four coordinates at degree 3).

Both backends are imported directly, bypassing the import-time selection,
and every run is checked to produce the identical (rank, pivots) pair --
the fallback is a twin, not an approximation.

Run:  python3 benchmarks/bench_elimination.py [--repeats N]
"""

import argparse
import random
import time

from algebroid import _pylinalg
from algebroid.cohomology import TruncationSpec, _assemble_matrix
from algebroid.linalg import _to_integer_rows
from algebroid.symplectic import ConstantSymplectic

try:
    from algebroid import _bareiss
except ImportError:  # pragma: no cover - build without the extension
    _bareiss = None


def random_matrix(rng, nrows, ncols, bound=9):
    return [
        [rng.randint(-bound, bound) for _ in range(ncols)] for _ in range(nrows)
    ]


def truncation_matrices():
    spec = TruncationSpec((0, 1, 2, 3), 3)
    std = ConstantSymplectic.standard()
    out = []
    for grade in (1, 2):
        rows, ncols = _assemble_matrix("lp", std, spec, grade, spec.degree)
        out.append((f"lp grade {grade} ({len(rows)}x{ncols})", _to_integer_rows(rows, ncols), ncols))
    return out


def time_backend(backend, rows, ncols, repeats):
    best = None
    result = None
    for _ in range(repeats):
        work = [list(row) for row in rows]
        started = time.perf_counter()
        value = backend.row_echelon(work, ncols)
        elapsed = time.perf_counter() - started
        best = elapsed if best is None else min(best, elapsed)
        result = value
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = random.Random(1729)
    cases = [
        (f"random {n}x{m}", random_matrix(rng, n, m), m)
        for n, m in ((40, 60), (80, 120), (120, 180))
    ]
    cases.extend(truncation_matrices())

    width = max(len(name) for name, _, _ in cases)
    header = f"{'case':<{width}}  {'pure (s)':>10}  {'compiled (s)':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, rows, ncols in cases:
        pure_time, pure_result = time_backend(_pylinalg, rows, ncols, args.repeats)
        if _bareiss is None:
            print(f"{name:<{width}}  {pure_time:>10.4f}  {'(not built)':>12}  {'':>8}")
            continue
        fast_time, fast_result = time_backend(_bareiss, rows, ncols, args.repeats)
        if pure_result != fast_result:
            raise SystemExit(f"backend mismatch on {name}: {pure_result} vs {fast_result}")
        print(
            f"{name:<{width}}  {pure_time:>10.4f}  {fast_time:>12.4f}  "
            f"{pure_time / fast_time:>7.1f}x"
        )


if __name__ == "__main__":
    main()
